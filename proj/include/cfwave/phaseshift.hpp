#pragma once

#include <cstddef>
#include <vector>

#include "cfwave/grid.hpp"

namespace cfwave {

// Pointwise tangent of the phase shift from the wave and its slope at one
// radius, valid once the potential has died off:
//   Q(r) = -{ [f' - ((l+1)/r) f] s_l(kr) + k f s_{l+1}(kr) }
//          / { [f' - ((l+1)/r) f] c_l(kr) + k f c_{l+1}(kr) }
// The overall minus makes Q equal +tan(delta) for the s_l cos + c_l sin
// decomposition used throughout.
double q_function(double k, int l, double r, double f, double fp);

struct PhaseOptions {
  int window = 100;    // samples per matching window
  double tol = 1e-6;   // radian spread allowed across the window
};

struct PhaseResult {
  double delta = 0;           // absolute phase shift (node-counted branch)
  double tan_delta = 0;       // a_c / a_s at the matching point
  int branch = 0;             // delta = branch*pi + atan(tan_delta)
  double plateau_spread = 0;  // radian spread across the matching window
  bool converged = false;
  double a_s = 0, a_c = 0;    // wave = a_s s_l + a_c c_l (sign-fixed launch)
  double norm_factor = 0;     // rescales f to sqrt(2/pi)(s cos + c sin)
  double r_match = 0;         // radius of the last window sample
};

// Match sampled values f (grid index of f[0] is i_begin) against the free
// Riccati pair.  df may be empty; slopes then come from the mesh stencil.
// Node counting starts at max(nodes_from_r, 0.25): for the channels handled
// here the regular solution has no node below 0.25, while near-wall samples
// may carry sign noise.  The matching window ends at the exchange cutoff or
// at the far end of the mesh, whichever gives the flatter plateau.
PhaseResult extract_phase(const RadialGrid& g, const std::vector<double>& f,
                          const std::vector<double>& df, std::size_t i_begin,
                          double k, int l, double nodes_from_r = 0.0,
                          const PhaseOptions& opt = {});

}  // namespace cfwave
