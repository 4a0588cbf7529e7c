#include "cfwave/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cfwave {
namespace {

using State = std::array<double, 5>;  // g1, g1', g2, g2', q

State rhs(const PairCoeffFn& coeffs, const WeightFn& weight, double r,
          const State& y) {
  const PairCoeffs c = coeffs(r);
  State d;
  d[0] = y[1];
  d[1] = c.s1 - c.v11 * y[0] - c.v12 * y[2];
  d[2] = y[3];
  d[3] = c.s2 - c.v21 * y[0] - c.v22 * y[2];
  d[4] = weight ? weight(r) * y[0] : 0.0;
  return d;
}

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// Difference between the 5th- and 4th-order weights (error estimator).
constexpr double kE[7] = {71.0 / 57600,     0.0,          -71.0 / 16695,
                          71.0 / 1920,      -17253.0 / 339200,
                          22.0 / 525,       -1.0 / 40};

// One RK step of size h from (r, y); fills y_out and the error estimate.
void dp5_step(const PairCoeffFn& coeffs, const WeightFn& weight, double r,
              const State& y, double h, const State& k0, State& y_out,
              State& err, State& k_last) {
  State k[7];
  k[0] = k0;
  for (int s = 1; s < 7; ++s) {
    State ys = y;
    for (int j = 0; j < s; ++j) {
      if (kA[s][j] == 0.0) continue;
      for (int i = 0; i < 5; ++i) ys[i] += h * kA[s][j] * k[j][i];
    }
    k[s] = rhs(coeffs, weight, r + kC[s] * h, ys);
  }
  y_out = y;
  for (int j = 0; j < 6; ++j) {
    if (kA[6][j] == 0.0) continue;
    for (int i = 0; i < 5; ++i) y_out[i] += h * kA[6][j] * k[j][i];
  }
  for (int i = 0; i < 5; ++i) {
    double e = 0.0;
    for (int j = 0; j < 7; ++j) e += kE[j] * k[j][i];
    err[i] = h * e;
  }
  k_last = k[6];  // FSAL: stage 7 equals the derivative at the new point
}

// Advance the state from r_a to r_b (h may be negative), adaptively unless
// opt.fixed_substeps asks for equal steps.
void advance_segment(const PairCoeffFn& coeffs, const WeightFn& weight,
                     double r_a, double r_b, State& y, const IvpOptions& opt) {
  const double span = r_b - r_a;
  if (span == 0.0) return;

  if (opt.fixed_substeps > 0) {
    const double h = span / opt.fixed_substeps;
    double r = r_a;
    for (int i = 0; i < opt.fixed_substeps; ++i) {
      State k0 = rhs(coeffs, weight, r, y);
      State y_new, err, k_last;
      dp5_step(coeffs, weight, r, y, h, k0, y_new, err, k_last);
      y = y_new;
      r = r_a + span * (i + 1) / opt.fixed_substeps;
    }
    return;
  }

  const double dir = span > 0 ? 1.0 : -1.0;
  double r = r_a;
  double h = span;  // first try: the whole segment
  State k0 = rhs(coeffs, weight, r, y);
  while (dir * (r_b - r) > 0.0) {
    if (dir * (r + h - r_b) > 0.0) h = r_b - r;
    if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(r)))
      throw std::runtime_error("integrate_pair: step size underflow");

    State y_new, err, k_last;
    dp5_step(coeffs, weight, r, y, h, k0, y_new, err, k_last);

    double norm2 = 0.0;
    for (int i = 0; i < 5; ++i) {
      const double scale =
          opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      const double q = err[i] / scale;
      norm2 += q * q;
    }
    const double errn = std::sqrt(norm2 / 5.0);

    if (errn <= 1.0) {
      r += h;
      y = y_new;
      k0 = k_last;
    }
    const double factor =
        (errn == 0.0) ? 5.0
                      : std::clamp(0.9 * std::pow(errn, -0.2), 0.2, 5.0);
    h *= factor;
  }
}

double spacing_at(const RadialGrid& g, std::size_t i) {
  return g.r[i + 1] - g.r[i];
}

// Lagrange value at x from up to six already-computed samples around it.
// Needed at region joints whose step ratio is not an exact integer, where
// the point one new step behind r[i] falls between mesh points.
template <typename Get>
double interp_at(const RadialGrid& g, std::size_t i0, std::size_t i_have,
                 double x, const Get& value) {
  const std::size_t n_have = i_have - i0 + 1;
  const std::size_t width = std::min<std::size_t>(6, n_have);
  auto it = std::lower_bound(g.r.begin() + i0, g.r.begin() + i_have + 1, x);
  std::size_t c = static_cast<std::size_t>(it - g.r.begin());
  std::size_t lo = (c >= i0 + width / 2) ? c - width / 2 : i0;
  if (lo + width - 1 > i_have) lo = i_have - (width - 1);
  double sum = 0.0;
  for (std::size_t a = lo; a < lo + width; ++a) {
    double w = 1.0;
    for (std::size_t b = lo; b < lo + width; ++b)
      if (b != a) w *= (x - g.r[b]) / (g.r[a] - g.r[b]);
    sum += w * value(a);
  }
  return sum;
}

}  // namespace

const PairState& SampledPair::at_index(std::size_t grid_index) const {
  const std::ptrdiff_t off =
      (static_cast<std::ptrdiff_t>(grid_index) -
       static_cast<std::ptrdiff_t>(i_begin)) *
      step;
  if (off < 0 || static_cast<std::size_t>(off) >= samples.size())
    throw std::out_of_range("SampledPair: grid index outside sampled range");
  return samples[static_cast<std::size_t>(off)];
}

SampledPair integrate_pair(const RadialGrid& grid, std::size_t i_from,
                           std::size_t i_to, const PairCoeffFn& coeffs,
                           const WeightFn& weight, const PairState& y0,
                           const IvpOptions& opt) {
  if (i_from >= grid.r.size() || i_to >= grid.r.size())
    throw std::out_of_range("integrate_pair: index outside mesh");

  SampledPair out;
  out.i_begin = i_from;
  out.step = (i_to >= i_from) ? +1 : -1;
  const std::size_t n =
      (i_to >= i_from) ? i_to - i_from + 1 : i_from - i_to + 1;
  out.samples.reserve(n);

  State y = {y0.g1, y0.d1, y0.g2, y0.d2, y0.q};
  out.samples.push_back(y0);
  std::size_t i = i_from;
  while (i != i_to) {
    const std::size_t j = (out.step > 0) ? i + 1 : i - 1;
    advance_segment(coeffs, weight, grid.r[i], grid.r[j], y, opt);
    out.samples.push_back({y[0], y[1], y[2], y[3], y[4]});
    i = j;
  }
  return out;
}

std::vector<double> numerov_single(const RadialGrid& grid, std::size_t i0,
                                   std::size_t i1,
                                   const std::function<double(double)>& f,
                                   const std::function<double(double)>& s,
                                   double u0, double u1) {
  if (i1 <= i0 + 1 || i1 >= grid.r.size())
    throw std::invalid_argument("numerov_single: need i0 + 1 < i1 < mesh size");

  std::vector<double> u(i1 - i0 + 1);
  u[0] = u0;
  u[1] = u1;
  auto F = [&](std::size_t i) { return f(grid.r[i]); };
  auto S = [&](std::size_t i) { return s ? s(grid.r[i]) : 0.0; };

  for (std::size_t i = i0 + 1; i < i1; ++i) {
    const double h = spacing_at(grid, i);
    // Locate the value one step h behind r[i]; on a step doubling that is
    // two mesh points back.
    double u_behind;
    if (std::abs(grid.r[i] - grid.r[i - 1] - h) < 1e-9 * h) {
      u_behind = u[i - 1 - i0];
    } else if (i >= i0 + 2 &&
               std::abs(grid.r[i] - grid.r[i - 2] - h) < 1e-9 * h) {
      u_behind = u[i - 2 - i0];
    } else {
      u_behind = interp_at(grid, i0, i, grid.r[i] - h,
                           [&](std::size_t a) { return u[a - i0]; });
    }
    const double h2 = h * h / 12.0;
    const double rb = grid.r[i] - h;
    const double fb = f(rb), fi = F(i), ff = F(i + 1);
    const double sb = s ? s(rb) : 0.0, si = S(i), sf = S(i + 1);
    const double lhs = 2.0 * u[i - i0] * (1.0 - 5.0 * h2 * fi) -
                       u_behind * (1.0 + h2 * fb) +
                       h2 * (sf + 10.0 * si + sb);
    u[i + 1 - i0] = lhs / (1.0 + h2 * ff);
  }
  return u;
}

std::vector<std::array<double, 2>> numerov_pair(
    const RadialGrid& grid, std::size_t i0, std::size_t i1,
    const PairCoeffFn& coeffs, std::array<double, 2> y0,
    std::array<double, 2> y1) {
  if (i1 <= i0 + 1 || i1 >= grid.r.size())
    throw std::invalid_argument("numerov_pair: need i0 + 1 < i1 < mesh size");

  std::vector<std::array<double, 2>> y(i1 - i0 + 1);
  y[0] = y0;
  y[1] = y1;

  // T(r) = I + (h^2/12) V(r), applied to a vector, and the source column.
  auto apply_T = [](const PairCoeffs& c, double h2, const std::array<double, 2>& v) {
    return std::array<double, 2>{v[0] + h2 * (c.v11 * v[0] + c.v12 * v[1]),
                                 v[1] + h2 * (c.v21 * v[0] + c.v22 * v[1])};
  };

  for (std::size_t i = i0 + 1; i < i1; ++i) {
    const double h = spacing_at(grid, i);
    std::array<double, 2> y_behind;
    if (std::abs(grid.r[i] - grid.r[i - 1] - h) < 1e-9 * h) {
      y_behind = y[i - 1 - i0];
    } else if (i >= i0 + 2 &&
               std::abs(grid.r[i] - grid.r[i - 2] - h) < 1e-9 * h) {
      y_behind = y[i - 2 - i0];
    } else {
      const double rb = grid.r[i] - h;
      y_behind = {interp_at(grid, i0, i, rb,
                            [&](std::size_t a) { return y[a - i0][0]; }),
                  interp_at(grid, i0, i, rb,
                            [&](std::size_t a) { return y[a - i0][1]; })};
    }
    const double h2 = h * h / 12.0;
    const double rb = grid.r[i] - h;
    const PairCoeffs cb = coeffs(rb), ci = coeffs(grid.r[i]),
                     cf = coeffs(grid.r[i + 1]);

    const auto Tb = apply_T(cb, h2, y_behind);
    const std::array<double, 2> mid = {
        2.0 * y[i - i0][0] - 10.0 * h2 * (ci.v11 * y[i - i0][0] + ci.v12 * y[i - i0][1]),
        2.0 * y[i - i0][1] - 10.0 * h2 * (ci.v21 * y[i - i0][0] + ci.v22 * y[i - i0][1])};
    const std::array<double, 2> src = {h2 * (cf.s1 + 10.0 * ci.s1 + cb.s1),
                                       h2 * (cf.s2 + 10.0 * ci.s2 + cb.s2)};
    const std::array<double, 2> rhsv = {mid[0] - Tb[0] + src[0],
                                        mid[1] - Tb[1] + src[1]};

    // Solve (I + h2 V(r_{i+1})) y_{i+1} = rhsv.
    const double a = 1.0 + h2 * cf.v11, b = h2 * cf.v12;
    const double c = h2 * cf.v21, d = 1.0 + h2 * cf.v22;
    const double det = a * d - b * c;
    if (std::abs(det) < 1e-14)
      throw std::runtime_error("numerov_pair: singular step matrix");
    y[i + 1 - i0] = {(d * rhsv[0] - b * rhsv[1]) / det,
                     (a * rhsv[1] - c * rhsv[0]) / det};
  }
  return y;
}

double mesh_derivative(const RadialGrid& grid, const std::vector<double>& u,
                       std::size_t i_begin, std::size_t i) {
  constexpr int kStencil = 7;
  if (u.size() < kStencil)
    throw std::invalid_argument("mesh_derivative: too few samples");
  const std::size_t i_last = i_begin + u.size() - 1;
  if (i < i_begin || i > i_last)
    throw std::out_of_range("mesh_derivative: index outside samples");

  // Center the stencil as well as the sample range allows.
  std::size_t lo = (i >= i_begin + 3) ? i - 3 : i_begin;
  if (lo + kStencil - 1 > i_last) lo = i_last - (kStencil - 1);

  // Weights for d/dr at grid.r[i] on the nodes grid.r[lo..lo+6] via the
  // standard divided-difference recursion (Fornberg).
  const double x0 = grid.r[i];
  double cw[kStencil][2] = {};
  cw[0][0] = 1.0;
  double c1 = 1.0;
  for (int n = 1; n < kStencil; ++n) {
    double c2 = 1.0;
    const double xn = grid.r[lo + n];
    for (int nu = 0; nu < n; ++nu) {
      const double xnu = grid.r[lo + nu];
      const double c3 = xn - xnu;
      c2 *= c3;
      if (nu == n - 1) {
        for (int m = 1; m >= 0; --m) {
          const double prev = (m > 0) ? cw[n - 1][m - 1] : 0.0;
          cw[n][m] = c1 * (m * prev - (grid.r[lo + n - 1] - x0) * cw[n - 1][m]) / c2;
        }
      }
      for (int m = 1; m >= 0; --m) {
        const double prev = (m > 0) ? cw[nu][m - 1] : 0.0;
        cw[nu][m] = ((xn - x0) * cw[nu][m] - m * prev) / c3;
      }
    }
    c1 = c2;
  }

  double d = 0.0;
  for (int j = 0; j < kStencil; ++j) d += cw[j][1] * u[lo + j - i_begin];
  return d;
}

double mesh_integral(const RadialGrid& grid, const std::vector<double>& u,
                     std::size_t i_begin, std::size_t i0, std::size_t i1) {
  if (i0 < i_begin || i1 < i0 || i1 >= i_begin + u.size())
    throw std::out_of_range("mesh_integral: range outside samples");
  if (i1 == i0) return 0.0;

  auto val = [&](std::size_t i) { return u[i - i_begin]; };
  double total = 0.0;
  std::size_t i = i0;
  while (i < i1) {
    // Extent of the uniform run starting at i.
    const double h = grid.r[i + 1] - grid.r[i];
    std::size_t j = i + 1;
    while (j < i1 && std::abs(grid.r[j + 1] - grid.r[j] - h) < 1e-9 * h) ++j;
    std::size_t n = j - i;  // intervals in this run

    std::size_t a = i;
    if (n % 2 == 1 && n >= 3) {
      // 3/8 rule on the first three intervals, Simpson on the rest.
      total += 3.0 * h / 8.0 *
               (val(a) + 3.0 * val(a + 1) + 3.0 * val(a + 2) + val(a + 3));
      a += 3;
      n -= 3;
    }
    if (n % 2 == 1) {
      // Single leftover interval (run of one): trapezoid.
      total += 0.5 * h * (val(a) + val(a + 1));
      a += 1;
      n -= 1;
    }
    for (std::size_t m = 0; m < n; m += 2)
      total += h / 3.0 *
               (val(a + m) + 4.0 * val(a + m + 1) + val(a + m + 2));
    i = j;
  }
  return total;
}

}  // namespace cfwave
