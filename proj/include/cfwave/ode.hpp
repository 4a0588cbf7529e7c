#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "cfwave/grid.hpp"

namespace cfwave {

// Coefficients of the linear second-order pair at radius r:
//   g1'' + v11 g1 + v12 g2 = s1
//   g2'' + v21 g1 + v22 g2 = s2
struct PairCoeffs {
  double v11 = 0, v12 = 0, v21 = 0, v22 = 0;
  double s1 = 0, s2 = 0;
};

using PairCoeffFn = std::function<PairCoeffs(double)>;

// Optional scalar weight w(r): the propagator then carries the running
// integral q(r) = q(start) + int w g1 dr as a fifth state component, so
// overlap quadratures converge with the same tolerance as the solution.
using WeightFn = std::function<double(double)>;

struct PairState {
  double g1 = 0, d1 = 0, g2 = 0, d2 = 0, q = 0;
};

// A trajectory sampled at every mesh point of a contiguous index range.
struct SampledPair {
  std::size_t i_begin = 0;  // grid index of samples.front()
  int step = +1;            // +1 outward, -1 inward
  std::vector<PairState> samples;

  // Sample at an absolute grid index inside the covered range.
  const PairState& at_index(std::size_t grid_index) const;
};

struct IvpOptions {
  double rtol = 1e-12;
  double atol = 1e-14;
  // > 0 disables step control: that many equal substeps per mesh interval.
  int fixed_substeps = 0;
};

// Embedded Dormand-Prince 5(4) propagation from grid point i_from to i_to in
// either direction, stopping exactly on every mesh point along the way.
SampledPair integrate_pair(const RadialGrid& grid, std::size_t i_from,
                           std::size_t i_to, const PairCoeffFn& coeffs,
                           const WeightFn& weight, const PairState& y0,
                           const IvpOptions& opt = {});

// Three-term Numerov sweep of u'' + f(r) u = s(r) over ascending mesh
// indices [i0, i1], seeded with the values at i0 and i0+1.  Where the mesh
// step doubles exactly, the point one full new step behind is already on
// the mesh and the recursion re-seeds itself; at joints with an inexact
// ratio that point is filled in by local polynomial interpolation.
// Returns values indexed from i0.  s may be empty (homogeneous equation).
std::vector<double> numerov_single(const RadialGrid& grid, std::size_t i0,
                                   std::size_t i1,
                                   const std::function<double(double)>& f,
                                   const std::function<double(double)>& s,
                                   double u0, double u1);

// Coupled two-channel Numerov: y'' + V(r) y = s(r) with V the 2x2 block of
// PairCoeffs and s its driving column.  Same seeding rules as above.
std::vector<std::array<double, 2>> numerov_pair(
    const RadialGrid& grid, std::size_t i0, std::size_t i1,
    const PairCoeffFn& coeffs, std::array<double, 2> y0,
    std::array<double, 2> y1);

// Derivative of mesh samples at absolute grid index i from a seven-point
// polynomial stencil (weights by divided differences, so region boundaries
// are handled exactly; sixth order on uniform spacing).
double mesh_derivative(const RadialGrid& grid, const std::vector<double>& u,
                       std::size_t i_begin, std::size_t i);

// Integral of mesh samples over grid indices [i0, i1]: composite Simpson on
// uniform runs with a 3/8 tail for odd interval counts, trapezoid across
// isolated step changes.
double mesh_integral(const RadialGrid& grid, const std::vector<double>& u,
                     std::size_t i_begin, std::size_t i0, std::size_t i1);

}  // namespace cfwave
