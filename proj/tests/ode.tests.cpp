#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <vector>

#include "cfwave/grid.hpp"
#include "cfwave/ode.hpp"
#include "cfwave/potentials.hpp"

using namespace cfwave;

namespace {

// Manufactured solution: g1 = e^{-r} sin r, g2 = e^{-r} cos r, with smooth
// couplings; the sources follow from the closed-form second derivatives.
double m_g1(double r) { return std::exp(-r) * std::sin(r); }
double m_d1(double r) { return std::exp(-r) * (std::cos(r) - std::sin(r)); }
double m_g2(double r) { return std::exp(-r) * std::cos(r); }
double m_d2(double r) { return -std::exp(-r) * (std::cos(r) + std::sin(r)); }

PairCoeffs manufactured(double r) {
  PairCoeffs c;
  c.v11 = 1.0 + r * r;
  c.v12 = std::exp(-r);
  c.v21 = 0.5 * std::sin(r);
  c.v22 = 2.0 + std::cos(r);
  const double g1pp = -2.0 * std::exp(-r) * std::cos(r);
  const double g2pp = 2.0 * std::exp(-r) * std::sin(r);
  c.s1 = g1pp + c.v11 * m_g1(r) + c.v12 * m_g2(r);
  c.s2 = g2pp + c.v21 * m_g1(r) + c.v22 * m_g2(r);
  return c;
}

PairState manufactured_state(double r) {
  return {m_g1(r), m_d1(r), m_g2(r), m_d2(r), 0.0};
}

double simpson(const std::function<double(double)>& f, double a, double b,
               int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

double det4(double m[4][4]) {
  // Gaussian elimination with partial pivoting.
  double det = 1.0;
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int rr = col + 1; rr < 4; ++rr)
      if (std::abs(m[rr][col]) > std::abs(m[piv][col])) piv = rr;
    if (piv != col) {
      for (int cc = 0; cc < 4; ++cc) std::swap(m[piv][cc], m[col][cc]);
      det = -det;
    }
    det *= m[col][col];
    if (m[col][col] == 0.0) return 0.0;
    for (int rr = col + 1; rr < 4; ++rr) {
      const double f = m[rr][col] / m[col][col];
      for (int cc = col; cc < 4; ++cc) m[rr][cc] -= f * m[col][cc];
    }
  }
  return det;
}

}  // namespace

TEST_CASE("integrate_pair reproduces a manufactured solution both ways") {
  const auto g = build_grid(GridSpec{});
  const std::size_t i8 = g.nearest(8.0);

  const auto out = integrate_pair(g, g.i_r0, i8, manufactured, {},
                                  manufactured_state(g.r0()));
  double worst = 0.0;
  for (std::size_t j = 0; j < out.samples.size(); ++j) {
    const double r = g.r[g.i_r0 + j];
    worst = std::max(worst, std::abs(out.samples[j].g1 - m_g1(r)));
    worst = std::max(worst, std::abs(out.samples[j].g2 - m_g2(r)));
    worst = std::max(worst, std::abs(out.samples[j].d1 - m_d1(r)));
    worst = std::max(worst, std::abs(out.samples[j].d2 - m_d2(r)));
  }
  std::printf("manufactured outward worst err = %.3e\n", worst);
  CHECK(worst < 1e-10);

  const auto in = integrate_pair(g, g.i_r0, 0, manufactured, {},
                                 manufactured_state(g.r0()));
  worst = 0.0;
  for (std::size_t j = 0; j < in.samples.size(); ++j) {
    const double r = g.r[g.i_r0 - j];
    worst = std::max(worst, std::abs(in.samples[j].g1 - m_g1(r)));
    worst = std::max(worst, std::abs(in.samples[j].g2 - m_g2(r)));
  }
  std::printf("manufactured inward  worst err = %.3e\n", worst);
  CHECK(worst < 1e-10);

  // at_index addressing in both directions.
  CHECK(out.at_index(i8).g1 == out.samples.back().g1);
  CHECK(in.at_index(0).g1 == in.samples.back().g1);
  CHECK_THROWS_AS(out.at_index(g.i_r0 - 1), std::out_of_range);
}

TEST_CASE("integrate_pair carries the overlap quadrature exactly") {
  const auto g = build_grid(GridSpec{});
  const std::size_t i8 = g.nearest(8.0);
  const auto out = integrate_pair(g, g.i_r0, i8, manufactured,
                                  bound_radial_1s, manufactured_state(g.r0()));
  const double want = simpson(
      [](double r) { return bound_radial_1s(r) * m_g1(r); }, g.r0(), g.r[i8],
      200000);
  CHECK(std::abs(out.samples.back().q - want) < 1e-11);

  // Inward leg: q accumulates the (negative) integral toward the origin.
  const auto in = integrate_pair(g, g.i_r0, 0, manufactured, bound_radial_1s,
                                 manufactured_state(g.r0()));
  const double want_in = -simpson(
      [](double r) { return bound_radial_1s(r) * m_g1(r); }, g.r[0], g.r0(),
      200000);
  CHECK(std::abs(in.samples.back().q - want_in) < 1e-11);
}

TEST_CASE("integrate_pair fixed-substep mode converges at fifth order") {
  GridSpec spec;
  spec.h = 0.2;  // coarse mesh so truncation dominates roundoff
  const auto g = build_grid(spec);
  const std::size_t i8 = g.nearest(8.0);

  auto endpoint_err = [&](int n) {
    IvpOptions opt;
    opt.fixed_substeps = n;
    const auto s = integrate_pair(g, g.i_r0, i8, manufactured, {},
                                  manufactured_state(g.r0()), opt);
    const double r = g.r[i8];
    return std::abs(s.samples.back().g1 - m_g1(r)) +
           std::abs(s.samples.back().g2 - m_g2(r));
  };
  const double e2 = endpoint_err(2);
  const double e4 = endpoint_err(4);
  const double e8 = endpoint_err(8);
  std::printf("fixed-step errors: %.3e / %.3e / %.3e, ratios %.1f, %.1f\n",
              e2, e4, e8, e2 / e4, e4 / e8);
  REQUIRE(e8 > 1e-13);  // stay above the roundoff floor
  CHECK(e2 / e4 > std::pow(2.0, 4.5));
  CHECK(e4 / e8 > std::pow(2.0, 4.5));
}

TEST_CASE("integrate_pair is linear in the initial state") {
  const auto g = build_grid(GridSpec{});
  const std::size_t i6 = g.nearest(6.0);
  auto homog = [](double r) {
    PairCoeffs c = manufactured(r);
    c.s1 = c.s2 = 0.0;
    return c;
  };
  const auto a = integrate_pair(g, g.i_r0, i6, homog, {}, {1, 0, 0, 0, 0});
  const auto b = integrate_pair(g, g.i_r0, i6, homog, {}, {0, 0, 1, 0, 0});
  const auto ab = integrate_pair(g, g.i_r0, i6, homog, {}, {1, 0, 1, 0, 0});
  for (std::size_t j = 0; j < a.samples.size(); j += 50) {
    CHECK(std::abs(a.samples[j].g1 + b.samples[j].g1 - ab.samples[j].g1) < 1e-10);
    CHECK(std::abs(a.samples[j].g2 + b.samples[j].g2 - ab.samples[j].g2) < 1e-10);
  }
}

TEST_CASE("fundamental system of the physical equations keeps det = 1") {
  // The first-order form of the coupled pair is traceless, so the
  // determinant of the fundamental matrix is constant.  Columns start as
  // the identity at r0.
  const auto g = build_grid(GridSpec{});
  ChannelSpec ch{0.5, 0, 0, true, true};
  auto coeffs = [&](double r) {
    const auto c = coupled_coefficients(ch, r);
    return PairCoeffs{c.v11, c.v12, c.v21, c.v22, 0.0, 0.0};
  };
  const std::size_t i_far = g.nearest(20.0);
  const PairState cols[4] = {{1, 0, 0, 0, 0},
                             {0, 1, 0, 0, 0},
                             {0, 0, 1, 0, 0},
                             {0, 0, 0, 1, 0}};
  std::vector<SampledPair> sols;
  for (const auto& y0 : cols)
    sols.push_back(integrate_pair(g, g.i_r0, i_far, coeffs, {}, y0));

  for (double rr : {2.0, 5.0, 11.0, 20.0}) {
    const std::size_t i = g.nearest(rr);
    double m[4][4];
    for (int c = 0; c < 4; ++c) {
      const auto& s = sols[c].at_index(i);
      m[0][c] = s.g1;
      m[1][c] = s.d1;
      m[2][c] = s.g2;
      m[3][c] = s.d2;
    }
    const double det = det4(m);
    INFO("r=" << rr);
    CHECK(std::abs(det - 1.0) < 1e-9);
  }
}

TEST_CASE("numerov_single propagates a free wave across step doublings") {
  const auto g = build_grid(GridSpec{});
  const double k = 0.7;
  auto f = [&](double) { return k * k; };
  const std::size_t i_end = g.nearest(30.0);
  const auto u = numerov_single(g, g.i_uniform0, i_end, f, {},
                                std::sin(k * g.r[g.i_uniform0]),
                                std::sin(k * g.r[g.i_uniform0 + 1]));
  double worst = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j)
    worst = std::max(worst,
                     std::abs(u[j] - std::sin(k * g.r[g.i_uniform0 + j])));
  std::printf("numerov free-wave worst err = %.3e\n", worst);
  CHECK(worst < 1e-6);
}

TEST_CASE("numerov_single handles an inhomogeneous term") {
  // u'' + 4 u = e^{-r}; exact u = A sin 2r + B cos 2r + e^{-r} / 5.
  const auto g = build_grid(GridSpec{});
  auto exact = [](double r) {
    return 0.3 * std::sin(2 * r) - 0.1 * std::cos(2 * r) + std::exp(-r) / 5.0;
  };
  const std::size_t i_end = g.nearest(10.0);
  const auto u = numerov_single(
      g, g.i_uniform0, i_end, [](double) { return 4.0; },
      [](double r) { return std::exp(-r); }, exact(g.r[g.i_uniform0]),
      exact(g.r[g.i_uniform0 + 1]));
  double worst = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j)
    worst = std::max(worst, std::abs(u[j] - exact(g.r[g.i_uniform0 + j])));
  CHECK(worst < 1e-7);
}

TEST_CASE("numerov_pair agrees with the adaptive propagator") {
  const auto g = build_grid(GridSpec{});
  auto homog = [](double r) {
    PairCoeffs c = manufactured(r);
    c.s1 = c.s2 = 0.0;
    return c;
  };
  // v11 = 1 + r^2 oscillates ever faster with r, so stay inside the fine
  // regions where h omega is small.
  const std::size_t i_end = g.nearest(4.8);
  const auto truth =
      integrate_pair(g, g.i_uniform0, i_end, homog, {}, {0.9, 0.1, -0.4, 0.2, 0});
  const auto y = numerov_pair(
      g, g.i_uniform0, i_end, homog,
      {truth.samples[0].g1, truth.samples[0].g2},
      {truth.samples[1].g1, truth.samples[1].g2});
  double worst = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    worst = std::max(worst, std::abs(y[j][0] - truth.samples[j].g1));
    worst = std::max(worst, std::abs(y[j][1] - truth.samples[j].g2));
  }
  std::printf("numerov_pair vs adaptive worst err = %.3e\n", worst);
  CHECK(worst < 1e-7);
}

TEST_CASE("numerov_pair reproduces a driven closed form") {
  // Decoupled driven pair: y1'' + y1 = 2 sin r has y1 = -r cos r + trig;
  // y2'' + 4 y2 = 0 stays free.
  const auto g = build_grid(GridSpec{});
  auto coeffs = [](double r) {
    return PairCoeffs{1.0, 0.0, 0.0, 4.0, 2.0 * std::sin(r), 0.0};
  };
  auto y1 = [](double r) { return -r * std::cos(r); };
  auto y2 = [](double r) { return 0.5 * std::sin(2.0 * r); };
  const std::size_t i_end = g.nearest(12.0);
  const auto y = numerov_pair(g, g.i_uniform0, i_end, coeffs,
                              {y1(g.r[g.i_uniform0]), y2(g.r[g.i_uniform0])},
                              {y1(g.r[g.i_uniform0 + 1]), y2(g.r[g.i_uniform0 + 1])});
  double worst = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double r = g.r[g.i_uniform0 + j];
    worst = std::max(worst, std::abs(y[j][0] - y1(r)));
    worst = std::max(worst, std::abs(y[j][1] - y2(r)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("mesh_derivative is exact on smooth data including boundaries") {
  const auto g = build_grid(GridSpec{});
  const std::size_t i0 = g.i_uniform0;
  const std::size_t i1 = g.nearest(20.0);
  std::vector<double> u(i1 - i0 + 1);
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = std::sin(g.r[i0 + j]);

  // Sample interior points, the region boundaries, and the range edges.
  std::vector<std::size_t> probes = {i0, i0 + 1, g.nearest(0.6),
                                     g.nearest(1.2), g.nearest(4.8),
                                     g.nearest(10.0), i1};
  for (auto i : probes) {
    const double d = mesh_derivative(g, u, i0, i);
    INFO("r=" << g.r[i]);
    CHECK(std::abs(d - std::cos(g.r[i])) < 1e-9);
  }
}

TEST_CASE("mesh_integral integrates across regions at high order") {
  const auto g = build_grid(GridSpec{});
  const std::size_t i0 = g.i_uniform0;
  const std::size_t i1 = g.nearest(30.0);
  std::vector<double> u(i1 - i0 + 1);
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = std::sin(g.r[i0 + j]);
  const double got = mesh_integral(g, u, i0, i0, i1);
  const double want = std::cos(g.r[i0]) - std::cos(g.r[i1]);
  std::printf("mesh_integral err = %.3e\n", std::abs(got - want));
  CHECK(std::abs(got - want) < 1e-7);

  // Sub-range and degenerate range.  Splitting changes the Simpson grouping,
  // so the parts agree with the whole only to quadrature accuracy.
  CHECK(mesh_integral(g, u, i0, i0 + 5, i0 + 5) == 0.0);
  const double part = mesh_integral(g, u, i0, i0, g.nearest(2.0)) +
                      mesh_integral(g, u, i0, g.nearest(2.0), i1);
  CHECK(std::abs(part - want) < 1e-7);
}

TEST_CASE("ode helpers reject bad ranges") {
  const auto g = build_grid(GridSpec{});
  std::vector<double> u(10, 1.0);
  CHECK_THROWS_AS(mesh_derivative(g, u, 5, 2), std::out_of_range);
  CHECK_THROWS_AS(mesh_integral(g, u, 5, 5, 20), std::out_of_range);
  CHECK_THROWS_AS(
      integrate_pair(g, 0, g.r.size(), manufactured, {}, PairState{}),
      std::out_of_range);
  CHECK_THROWS_AS(numerov_single(g, 3, 4, [](double) { return 1.0; }, {}, 0, 1),
                  std::invalid_argument);
}
