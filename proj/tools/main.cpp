// cfwave: continuum phase shifts for low-energy electron-hydrogen
// scattering.  Subcommands compute single channels, sweep channel grids,
// compare solvers, regenerate the bundled reference tables and figure
// curves, and probe steplength sensitivity.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "cfwave/baselines.hpp"
#include "cfwave/reference.hpp"
#include "cfwave/run.hpp"

using namespace cfwave;

namespace {

constexpr const char* kSolverOrder[4] = {"kftee", "mcdmm", "fmcc", "bn"};

std::string fmt9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Common channel/grid/output flags shared by the computing subcommands.
struct Common {
  std::string k_text, k_range, l_text, spin_text, solver_text, h_text;
  double r0 = 1.0, rmax = 184.8;
  std::string config_path, output, format = "csv";
  int jobs = 1;
  bool strict = false, deterministic = false;
};

void add_common(CLI::App* cmd, Common& c) {
  // --h is a real option here, so help answers only to --help.
  cmd->set_help_flag("--help", "print this help message and exit");
  cmd->add_option("--k", c.k_text, "momenta (a.u.), comma list");
  cmd->add_option("--k-range", c.k_range, "momenta as start:stop:step");
  cmd->add_option("--l", c.l_text, "partial waves, comma list");
  cmd->add_option("--spin", c.spin_text, "total spin: 0, 1 or both");
  cmd->add_option("--solver", c.solver_text,
                  "solvers, comma list of kftee,mcdmm,fmcc,bn");
  cmd->add_option("--h", c.h_text, "base steps, comma list or range");
  cmd->add_option("--r0", c.r0, "origin-condition radius");
  cmd->add_option("--rmax", c.rmax,
                  "mesh extent; <= 40.8 drops the far region");
  cmd->add_option("--config", c.config_path, "key=value config file");
  cmd->add_option("--output", c.output, "write here instead of stdout");
  cmd->add_option("--format", c.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--jobs", c.jobs, "worker threads")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--strict", c.strict, "exit 2 on any unconverged row");
  cmd->add_flag("--deterministic", c.deterministic,
                "omit wall-clock timing from output");
}

// Precedence: defaults < CFWAVE_CONFIG < --config < explicit flags.
RunConfig build_config(const CLI::App* cmd, const Common& c) {
  RunConfig cfg;
  if (const char* env = std::getenv("CFWAVE_CONFIG"); env && *env)
    apply_config_file(cfg, env);
  if (cmd->count("--config")) apply_config_file(cfg, c.config_path);

  if (cmd->count("--k")) cfg.k = parse_number_list(c.k_text);
  if (cmd->count("--k-range")) {
    const std::vector<double> r = parse_number_list(c.k_range);
    if (cmd->count("--k"))
      cfg.k.insert(cfg.k.end(), r.begin(), r.end());
    else
      cfg.k = r;
  }
  if (cmd->count("--l")) {
    cfg.l.clear();
    for (double v : parse_number_list(c.l_text))
      cfg.l.push_back(static_cast<int>(std::llround(v)));
  }
  if (cmd->count("--spin")) {
    if (c.spin_text == "both")
      cfg.spin = {0, 1};
    else if (c.spin_text == "0")
      cfg.spin = {0};
    else if (c.spin_text == "1")
      cfg.spin = {1};
    else
      throw std::invalid_argument("--spin must be 0, 1 or both");
  }
  if (cmd->count("--solver")) {
    cfg.solver.clear();
    std::stringstream ss(c.solver_text);
    std::string part;
    while (std::getline(ss, part, ','))
      if (!part.empty()) cfg.solver.push_back(part);
    if (cfg.solver.empty())
      throw std::invalid_argument("--solver list is empty");
  }
  if (cmd->count("--h")) cfg.h = parse_number_list(c.h_text);
  if (cmd->count("--r0")) cfg.r0 = c.r0;
  if (cmd->count("--rmax")) cfg.rmax = c.rmax;
  if (cmd->count("--output")) cfg.output = c.output;
  if (cmd->count("--format")) cfg.format = c.format;
  if (cmd->count("--jobs")) cfg.jobs = c.jobs;
  if (c.strict) cfg.strict = true;
  if (c.deterministic) cfg.deterministic = true;
  return cfg;
}

void write_out(const RunConfig& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output);
  if (!out)
    throw std::invalid_argument("cannot open output file '" + cfg.output +
                                "'");
  out << text;
}

int finish(const RunConfig& cfg, const std::vector<ResultRow>& rows) {
  write_out(cfg, cfg.format == "json" ? to_json(rows, cfg.deterministic)
                                      : to_csv(rows, cfg.deterministic));
  if (cfg.strict)
    for (const ResultRow& r : rows)
      if (!r.converged) return 2;
  return 0;
}

// phaseshift / sweep: rows for the Cartesian product of the channel axes.
int cmd_rows(const CLI::App* cmd, const Common& c) {
  const RunConfig cfg = build_config(cmd, c);
  return finish(cfg, run_sweep(cfg));
}

// compare: one line per channel with a delta column per solver, plus the
// difference of each later solver against the first requested one.
int cmd_compare(const CLI::App* cmd, const Common& c) {
  RunConfig cfg = build_config(cmd, c);
  if (!cmd->count("--solver")) cfg.solver = {"kftee", "mcdmm", "fmcc", "bn"};
  if (cfg.solver.size() < 2)
    throw std::invalid_argument("compare needs at least two solvers");
  const std::vector<ResultRow> rows = run_sweep(cfg);

  // Requested solvers in canonical order; the first is the yardstick.
  std::vector<std::string> sols;
  for (const char* t : kSolverOrder)
    if (std::find(cfg.solver.begin(), cfg.solver.end(), t) !=
        cfg.solver.end())
      sols.push_back(t);

  using Key = std::tuple<double, int, int, double>;  // k, l, S, h
  std::map<Key, std::map<std::string, double>> cells;
  for (const ResultRow& r : rows)
    cells[{r.k, r.l, r.spin, r.h}][r.solver] = r.delta;

  std::string out = "k,l,S,h";
  for (const std::string& s : sols) out += ",delta_" + s;
  for (std::size_t i = 1; i < sols.size(); ++i)
    out += ",diff_" + sols[i];
  out += '\n';
  for (const auto& [key, per] : cells) {
    out += fmt9(std::get<0>(key));
    out += ',' + std::to_string(std::get<1>(key));
    out += ',' + std::to_string(std::get<2>(key));
    out += ',' + fmt9(std::get<3>(key));
    const double ref = per.at(sols[0]);
    for (const std::string& s : sols) out += ',' + fmt9(per.at(s));
    for (std::size_t i = 1; i < sols.size(); ++i)
      out += ',' + fmt9(per.at(sols[i]) - ref);
    out += '\n';
  }
  write_out(cfg, out);
  if (cfg.strict)
    for (const ResultRow& r : rows)
      if (!r.converged) return 2;
  return 0;
}

std::string column_name(const reference::Column& col, bool low_l) {
  std::string name = "S" + std::to_string(col.spin) + "_l" +
                     std::to_string(col.l) + "_" + col.solver;
  if (low_l && std::string(col.solver) == "mcdmm") {
    char buf[16];
    std::snprintf(buf, sizeof buf, "_h%.3f", col.h);
    name += buf;
  }
  return name;
}

// reproduce --table: recompute every cell of a bundled table with the
// solver and step the column names, emit the computed table as CSV, and
// report deviations from the bundled values on stderr.
int reproduce_table(const RunConfig& cfg, int id) {
  const reference::Table& t = reference::table(id);
  const bool low_l = t.columns[0].l <= 1;

  std::vector<std::vector<double>> computed(
      t.k.size(), std::vector<double>(t.columns.size()));
  std::vector<std::vector<bool>> ok(t.k.size(),
                                    std::vector<bool>(t.columns.size()));
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    const reference::Column& col = t.columns[c];
    for (std::size_t r = 0; r < t.k.size(); ++r) {
      const ResultRow row =
          run_row(cfg, t.k[r], col.l, col.spin, col.solver, col.h);
      computed[r][c] = row.delta;
      ok[r][c] = row.converged;
    }
  }

  std::string out = "k";
  for (const reference::Column& col : t.columns)
    out += ',' + column_name(col, low_l);
  out += '\n';
  for (std::size_t r = 0; r < t.k.size(); ++r) {
    out += fmt9(t.k[r]);
    for (std::size_t c = 0; c < t.columns.size(); ++c)
      out += ',' + fmt9(computed[r][c]);
    out += '\n';
  }
  write_out(cfg, out);

  // Deviation report: cell-level for the canonical-solver columns,
  // step-spread statistics for the mesh-solver columns.
  std::fprintf(stderr, "deviation report, table %d\n", id);
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    const reference::Column& col = t.columns[c];
    if (std::string(col.solver) != "kftee") continue;
    double worst = 0;
    double worst_k = 0;
    for (std::size_t r = 0; r < t.k.size(); ++r) {
      const double dev = std::abs(computed[r][c] - t.value[r][c]);
      std::fprintf(stderr, "  %s k=%.2f: computed %.6f bundled %.6f |dev| %.6f\n",
                   column_name(col, low_l).c_str(), t.k[r], computed[r][c],
                   t.value[r][c], dev);
      if (dev > worst) {
        worst = dev;
        worst_k = t.k[r];
      }
    }
    std::fprintf(stderr, "  %s: max |deviation| %.6f at k=%.2f\n",
                 column_name(col, low_l).c_str(), worst, worst_k);
  }
  if (low_l) {
    // Three steps per spin: compare the spread across them, ours vs bundled.
    for (int spin : {0, 1}) {
      std::fprintf(stderr,
                   "  mesh-solver step spread (S=%d), computed vs bundled:\n",
                   spin);
      for (std::size_t r = 0; r < t.k.size(); ++r) {
        double clo = 0, chi = 0, blo = 0, bhi = 0;
        bool first = true;
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
          const reference::Column& col = t.columns[c];
          if (col.spin != spin || std::string(col.solver) != "mcdmm")
            continue;
          if (first) {
            clo = chi = computed[r][c];
            blo = bhi = t.value[r][c];
            first = false;
          } else {
            clo = std::min(clo, computed[r][c]);
            chi = std::max(chi, computed[r][c]);
            blo = std::min(blo, t.value[r][c]);
            bhi = std::max(bhi, t.value[r][c]);
          }
        }
        std::fprintf(stderr, "    k=%.2f: %.2e vs %.2e\n", t.k[r], chi - clo,
                     bhi - blo);
      }
    }
  } else {
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      const reference::Column& col = t.columns[c];
      if (std::string(col.solver) != "mcdmm") continue;
      for (std::size_t r = 0; r < t.k.size(); ++r) {
        if (reference::unstable_cell(t.value[r][c])) {
          std::fprintf(stderr,
                       "  %s k=%.2f: bundled cell unstable; computed %.6f "
                       "(converged=%d)\n",
                       column_name(col, low_l).c_str(), t.k[r],
                       computed[r][c], int(ok[r][c]));
          continue;
        }
        std::fprintf(stderr, "  %s k=%.2f: computed %.6f bundled %.6f\n",
                     column_name(col, low_l).c_str(), t.k[r], computed[r][c],
                     t.value[r][c]);
      }
    }
  }
  return 0;
}

// reproduce --figure: curves of every solver family for the channel the
// figure shows, on a uniform momentum grid.
int reproduce_figure(const RunConfig& cfg, int id) {
  const int spin = (id == 2 || id == 4) ? 1 : 0;
  const int l = (id >= 3) ? 1 : 0;
  std::string out = "k,kftee,bn,fmcc\n";
  for (int i = 1; i <= 15; ++i) {
    const double k = 0.1 * i;
    out += fmt9(k);
    for (const char* solver : {"kftee", "bn", "fmcc"}) {
      const ResultRow row = run_row(cfg, k, l, spin, solver, cfg.h.at(0));
      out += ',' + fmt9(row.delta);
    }
    out += '\n';
  }
  write_out(cfg, out);
  std::fprintf(stderr, "figure %d: S=%d l=%d curves on k=0.1..1.5\n", id,
               spin, l);
  return 0;
}

// sensitivity: one channel re-solved across base steps, rows plus a stderr
// summary of the spread.
int cmd_sensitivity(const CLI::App* cmd, const Common& c) {
  RunConfig cfg = build_config(cmd, c);
  if (cfg.k.size() != 1)
    throw std::invalid_argument("sensitivity needs exactly one --k");
  if (cfg.l.size() != 1)
    throw std::invalid_argument("sensitivity needs exactly one --l");
  if (cfg.solver.size() != 1)
    throw std::invalid_argument("sensitivity needs exactly one --solver");
  if (!cmd->count("--h")) cfg.h = {0.004, 0.006, 0.008};

  std::vector<ResultRow> rows;
  bool all_converged = true;
  for (int spin : cfg.spin) {
    const ChannelSpec ch{cfg.k[0], cfg.l[0], spin};
    const SensitivityReport rep =
        steplength_sensitivity(ch, cfg.solver[0], cfg.h);
    for (std::size_t i = 0; i < rep.h.size(); ++i) {
      ResultRow row = run_row(cfg, cfg.k[0], cfg.l[0], spin, cfg.solver[0],
                              rep.h[i]);
      rows.push_back(row);
      all_converged = all_converged && row.converged;
    }
    std::fprintf(stderr,
                 "sensitivity %s k=%g l=%d S=%d: spread %.3e rad, %d stable "
                 "digits\n",
                 cfg.solver[0].c_str(), cfg.k[0], cfg.l[0], spin, rep.spread,
                 rep.stable_digits);
  }
  write_out(cfg, cfg.format == "json" ? to_json(rows, cfg.deterministic)
                                      : to_csv(rows, cfg.deterministic));
  return (cfg.strict && !all_converged) ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "cfwave: continuum phase shifts for low-energy electron-hydrogen "
      "scattering (static + polarization + exchange model; energies in "
      "Rydberg, lengths in Bohr radii)"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);

  Common c_phase, c_sweep, c_compare, c_repro, c_sens;

  CLI::App* phase = app.add_subcommand(
      "phaseshift", "compute phase shifts for the requested channels");
  add_common(phase, c_phase);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "range-oriented alias of phaseshift for channel grids");
  add_common(sweep, c_sweep);

  CLI::App* compare = app.add_subcommand(
      "compare", "side-by-side solver columns per channel");
  add_common(compare, c_compare);

  CLI::App* repro = app.add_subcommand(
      "reproduce",
      "recompute a bundled reference table or figure curve set (CSV), with "
      "a deviation report on stderr");
  int table_id = 0, figure_id = 0;
  CLI::Option* opt_table =
      repro->add_option("--table", table_id, "table id")
          ->check(CLI::IsMember({1, 2, 3, 4}));
  CLI::Option* opt_figure =
      repro->add_option("--figure", figure_id, "figure id")
          ->check(CLI::IsMember({1, 2, 3, 4}));
  opt_table->excludes(opt_figure);
  add_common(repro, c_repro);

  CLI::App* sens = app.add_subcommand(
      "sensitivity", "re-solve one channel across base steps");
  add_common(sens, c_sens);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (phase->parsed()) return cmd_rows(phase, c_phase);
    if (sweep->parsed()) return cmd_rows(sweep, c_sweep);
    if (compare->parsed()) return cmd_compare(compare, c_compare);
    if (repro->parsed()) {
      const RunConfig cfg = build_config(repro, c_repro);
      if (cfg.format != "csv")
        throw std::invalid_argument("reproduce emits CSV only");
      if (opt_table->count()) return reproduce_table(cfg, table_id);
      if (opt_figure->count()) return reproduce_figure(cfg, figure_id);
      throw std::invalid_argument("reproduce needs --table or --figure");
    }
    if (sens->parsed()) return cmd_sensitivity(sens, c_sens);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
