#include "cfwave/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cfwave {

std::vector<std::size_t> RadialGrid::epsilon_indices() const {
  std::vector<std::size_t> idx;
  for (std::size_t i = i_uniform0 + 1; i-- > 0;) idx.push_back(i);
  return idx;
}

std::size_t RadialGrid::nearest(double x) const {
  auto it = std::lower_bound(r.begin(), r.end(), x);
  if (it == r.end()) return r.size() - 1;
  if (it == r.begin()) return 0;
  const std::size_t hi = static_cast<std::size_t>(it - r.begin());
  return (x - r[hi - 1] <= r[hi] - x) ? hi - 1 : hi;
}

RadialGrid build_grid(const GridSpec& spec) {
  if (!(spec.h > 0.0)) throw std::invalid_argument("grid: step must be > 0");
  if (!(spec.r_min > 0.0) || spec.r_min >= spec.h)
    throw std::invalid_argument("grid: need 0 < r_min < h");
  if (spec.r0 <= spec.r_min || spec.r0 >= kRegionEdges[2])
    throw std::invalid_argument("grid: r0 outside the interaction zone");

  RadialGrid g;

  // Geometric tail h/2, h/4, ... down to r_min (ascending order).
  std::vector<double> tail;
  for (double x = spec.h / 2.0; x > spec.r_min; x /= 2.0) tail.push_back(x);
  tail.push_back(spec.r_min);
  std::reverse(tail.begin(), tail.end());
  g.r = tail;
  g.i_uniform0 = g.r.size();  // the point at h itself, appended below

  // Uniform ladder: region 1 runs [h, 1.2], then doubling steps per region.
  const int n_regions = spec.extended ? 4 : 3;
  double lo = spec.h;
  g.r.push_back(lo);
  for (int reg = 0; reg < n_regions; ++reg) {
    const double hi = kRegionEdges[reg];
    const double target = spec.h * static_cast<double>(1 << reg);
    const double span = hi - lo;
    const int n = std::max(1, static_cast<int>(std::lround(span / target)));
    const double step = span / n;
    for (int i = 1; i <= n; ++i) g.r.push_back(lo + step * i);
    g.r.back() = hi;  // pin the boundary exactly
    lo = hi;
  }

  g.h_base = g.r[g.i_uniform0 + 1] - g.r[g.i_uniform0];
  g.i_r0 = g.nearest(spec.r0);
  g.i_cut = g.nearest(kRegionEdges[2]);
  if (std::abs(g.r[g.i_cut] - kRegionEdges[2]) > 1e-9)
    throw std::logic_error("grid: cutoff boundary missing from mesh");
  return g;
}

}  // namespace cfwave
