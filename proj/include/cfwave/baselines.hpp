#pragma once

#include <string>
#include <vector>

#include "cfwave/grid.hpp"
#include "cfwave/phaseshift.hpp"
#include "cfwave/potentials.hpp"

namespace cfwave {

// Mesh-based comparison solvers.  Both propagate outward only, on the
// uniform ladder of the grid, by Numerov recursion from a power-series
// launch at the first two mesh points; no origin wall, no inward sweep.
// Their purpose is to expose how that classical scheme behaves across
// step sizes, so they deliberately keep its error characteristics.

struct BaselineOptions {
  // Two-point matching: number of point pairs inspected at the far end of
  // the mesh and the radian spread across them that still counts as
  // converged.
  int pairs = 10;
  double match_tol = 1e-4;
};

// Coupled-pair outward Numerov solver with exact exchange.  The driving
// amplitude is fixed by the same overlap-quadrature identity as the main
// solver (Simpson sums on the mesh), the closed channel's growing power is
// removed by mixing the two regular launches, and the phase comes from
// matching wave values at pairs of mesh points against the free pair.
// An unconverged result (flag false, spread in plateau_spread) signals the
// step-size instability of this scheme, not a usage error.
PhaseResult solve_mcdmm(const RadialGrid& g, const ChannelSpec& ch,
                        const BaselineOptions& opt = {});

// Single-channel outward Numerov solver with a local equivalent-exchange
// potential in place of the coupling (model none: no exchange at all).
// Phase extraction and branch logic are shared with the main pipeline.
PhaseResult solve_local_exchange(const RadialGrid& g, const ChannelSpec& ch,
                                 ExchangeModel model);

// Phase shifts of one channel recomputed across base step sizes.
struct SensitivityReport {
  ChannelSpec channel;
  std::string solver;          // "kftee", "mcdmm", "fmcc" or "bn"
  std::vector<double> h;       // base steps probed
  std::vector<double> delta;   // phase shift per step
  std::vector<bool> converged; // per-step solver flag
  double spread = 0;           // max delta - min delta
  int stable_digits = 0;       // leading significant digits unaffected
};

// Re-solves the channel on a fresh grid per step size.  solver selects the
// pipeline by its command-line token; throws std::invalid_argument for an
// unknown token or an empty step list.
SensitivityReport steplength_sensitivity(const ChannelSpec& ch,
                                         const std::string& solver,
                                         const std::vector<double>& hs);

}  // namespace cfwave
