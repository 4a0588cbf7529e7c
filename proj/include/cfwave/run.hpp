#pragma once

#include <string>
#include <vector>

namespace cfwave {

// One sweep request: the Cartesian product of momenta, partial waves,
// spins, solver ids and base steps, plus the numerical knobs shared by
// every row.  Defaults reproduce the standard mesh: base step 0.006 with
// region boundaries 1.2 / 4.8 / 40.8 / 184.8, origin point r0 = 1, far
// region kept.
struct RunConfig {
  std::vector<double> k;
  std::vector<int> l{0};
  std::vector<int> spin{0, 1};
  std::vector<std::string> solver{"kftee"};
  std::vector<double> h{0.006};

  double r0 = 1.0;            // origin-condition point (snapped to mesh)
  double rmax = 184.8;        // <= 40.8 drops the far mesh region
  int window = 100;           // plateau samples per matching window
  double plateau_tol = 1e-6;  // radian spread allowed across the window
  double origin_tol = 1e-6;   // origin-limit stall tolerance
  double rtol = 1e-12;        // integrator relative tolerance
  double atol = 1e-14;        // integrator absolute tolerance

  std::string format = "csv";  // "csv" or "json"
  std::string output;          // output path; empty = stdout
  int jobs = 1;                // worker threads for sweeps
  bool strict = false;         // nonzero exit on any unconverged row
  bool deterministic = false;  // omit wall-clock timing from output
};

// One computed phase shift.  delta is NaN when the row did not converge;
// tan_delta and branch are still reported as computed.
struct ResultRow {
  double k = 0;
  int l = 0;
  int spin = 0;
  std::string solver;
  double h = 0;
  double delta = 0;
  double tan_delta = 0;
  int branch = 0;
  bool converged = false;
  double plateau_spread = 0;
  double wall_ms = 0;  // per-row wall-clock; meaningless in deterministic mode
};

// Solve a single (k, l, spin, solver, h) combination with cfg's knobs.
// Throws std::invalid_argument for an unknown solver id.
ResultRow run_row(const RunConfig& cfg, double k, int l, int spin,
                  const std::string& solver, double h);

// The full Cartesian product.  Axis lists are sorted and deduplicated
// (solver ids in the fixed order kftee, mcdmm, fmcc, bn), so identical
// configs produce identical row sequences in (k, l, spin, solver, h) order
// no matter how the lists were given or how many workers ran them.
std::vector<ResultRow> run_sweep(const RunConfig& cfg);

// CSV with header k,l,S,solver,h,delta,tan_delta,branch,converged,
// plateau_spread and floats at 9 significant digits; a wall_ms column is
// appended unless deterministic.  JSON carries the same fields at full
// precision (delta: null when unconverged, wall_ms omitted when
// deterministic) and round-trips through rows_from_json.
std::string to_csv(const std::vector<ResultRow>& rows, bool deterministic);
std::string to_json(const std::vector<ResultRow>& rows, bool deterministic);
std::vector<ResultRow> rows_from_json(const std::string& text);

// Flat key=value config text with '#' comments and blank lines.  Keys match
// the flag names: k, l, spin, solver, h (comma lists; k and h also accept
// start:stop:step), r0, rmax, window, plateau_tol, origin_tol, rtol, atol,
// format, output, jobs, strict, deterministic.  Unknown keys and malformed
// values throw std::invalid_argument naming the line.  `name` labels the
// source in diagnostics.
void apply_config_text(RunConfig& cfg, const std::string& text,
                       const std::string& name);
void apply_config_file(RunConfig& cfg, const std::string& path);

// Expands "start:stop:step" (inclusive endpoints within half a step) or a
// comma list of numbers.  Used for k and h on both flags and config keys.
std::vector<double> parse_number_list(const std::string& text);

}  // namespace cfwave
