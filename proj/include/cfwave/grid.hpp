#pragma once

#include <cstddef>
#include <vector>

namespace cfwave {

// Radial mesh layout.  Four piecewise-uniform regions with doubling steps
// cover the interaction zone and the matching zone; a geometric tail below
// the first uniform point refines down to r_min so that limits toward the
// origin can be read off mesh points.  Region boundaries are fixed; each
// region's actual step is span/round(span/target) so the boundaries land
// exactly on mesh points for any base step.
struct GridSpec {
  double h = 0.006;      // target step of the innermost uniform region
  double r_min = 1e-7;   // first mesh point
  double r0 = 1.0;       // origin-condition point, snapped onto the mesh
  bool extended = true;  // include the far region beyond the exchange cutoff
};

struct RadialGrid {
  std::vector<double> r;     // strictly ascending mesh points
  std::size_t i_uniform0;    // first point of the uniform ladder
  std::size_t i_r0;          // snapped origin-condition point
  std::size_t i_cut;         // exchange cutoff (end of region 3)
  double h_base;             // realized step of region 1

  double r0() const { return r[i_r0]; }
  double r_cut() const { return r[i_cut]; }
  double r_max() const { return r.back(); }

  // Mesh points at and below the start of the uniform ladder, in decreasing
  // order; used as the shrinking evaluation sequence for origin limits.
  std::vector<std::size_t> epsilon_indices() const;

  // Index of the mesh point nearest to radius x.
  std::size_t nearest(double x) const;
};

// Region boundaries shared by every mesh (atomic units of length).
inline constexpr double kRegionEdges[4] = {1.2, 4.8, 40.8, 184.8};

RadialGrid build_grid(const GridSpec& spec);

}  // namespace cfwave
