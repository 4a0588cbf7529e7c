#include "cfwave/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cfwave {
namespace {

// Linear combination c1*a + c2*b + c3*c + c4*d of sampled states at one
// absolute grid index.
PairState combine(const SampledPair& a, const SampledPair& b,
                  const SampledPair& c, const SampledPair* d, double c1,
                  double c2, double c3, double c4, std::size_t i) {
  const PairState& pa = a.at_index(i);
  const PairState& pb = b.at_index(i);
  const PairState& pc = c.at_index(i);
  PairState out;
  out.g1 = c1 * pa.g1 + c2 * pb.g1 + c3 * pc.g1;
  out.d1 = c1 * pa.d1 + c2 * pb.d1 + c3 * pc.d1;
  out.g2 = c1 * pa.g2 + c2 * pb.g2 + c3 * pc.g2;
  out.d2 = c1 * pa.d2 + c2 * pb.d2 + c3 * pc.d2;
  if (d) {
    const PairState& pd = d->at_index(i);
    out.g1 += c4 * pd.g1;
    out.d1 += c4 * pd.d1;
    out.g2 += c4 * pd.g2;
    out.d2 += c4 * pd.d2;
  }
  return out;
}

}  // namespace

CanonicalBasis build_basis(const RadialGrid& g, const ChannelSpec& ch,
                           const IvpOptions& opt) {
  PairCoeffFn homog = [ch](double r) {
    const CoeffSample c = coupled_coefficients(ch, r);
    return PairCoeffs{c.v11, c.v12, c.v21, c.v22, 0.0, 0.0};
  };
  PairCoeffFn driven = [ch](double r) {
    const CoeffSample c = coupled_coefficients(ch, r);
    return PairCoeffs{c.v11, c.v12, c.v21, c.v22, c.w1, 0.0};
  };
  const bool has_drive = (ch.l == 0 && ch.exchange);
  // Overlap quadratures are only consumed by the s-wave exchange constants.
  const WeightFn weight = has_drive ? WeightFn(bound_radial_1s) : WeightFn{};
  return build_basis(g, homog, driven, weight, has_drive, opt);
}

CanonicalBasis build_basis(const RadialGrid& g, const PairCoeffFn& homog,
                           const PairCoeffFn& driven, const WeightFn& weight,
                           bool has_drive, const IvpOptions& opt) {
  CanonicalBasis basis;
  basis.has_drive = has_drive;

  const std::size_t last = g.r.size() - 1;
  const PairState seeds[4] = {{1, 0, 0, 0, 0},
                              {0, 0, 1, 0, 0},
                              {0, 1, 0, 0, 0},
                              {0, 0, 0, 1, 0}};
  SampledPair* out[4] = {&basis.a1_out, &basis.a2_out, &basis.b1_out,
                         &basis.b2_out};
  SampledPair* in[4] = {&basis.a1_in, &basis.a2_in, &basis.b1_in,
                        &basis.b2_in};
  for (int i = 0; i < 4; ++i) {
    *out[i] = integrate_pair(g, g.i_r0, last, homog, weight, seeds[i], opt);
    *in[i] = integrate_pair(g, g.i_r0, 0, homog, weight, seeds[i], opt);
  }
  if (basis.has_drive) {
    basis.sg_out = integrate_pair(g, g.i_r0, last, driven, weight, {}, opt);
    basis.sg_in = integrate_pair(g, g.i_r0, 0, driven, weight, {}, opt);
  }
  return basis;
}

OriginLimits origin_limits(const RadialGrid& g, const CanonicalBasis& basis,
                           double tol, double min_det) {
  // Geometric wall sequence: halve the radius from just below r0 down to the
  // bottom of the mesh.
  std::vector<std::size_t> walls;
  double next_r = 0.6 * g.r0();
  for (std::size_t i = g.i_r0; i-- > 0;) {
    if (g.r[i] <= next_r) {
      walls.push_back(i);
      next_r = 0.55 * g.r[i];
    }
  }
  if (walls.size() < 3)
    throw std::runtime_error("origin_limits: too few wall candidates");

  struct Eval {
    Mat2 lam;
    double lv1, lv2;
  };
  std::vector<Eval> evals;
  std::vector<double> eps_used;
  for (auto i : walls) {
    const PairState& a1 = basis.a1_in.at_index(i);
    const PairState& a2 = basis.a2_in.at_index(i);
    const PairState& b1 = basis.b1_in.at_index(i);
    const PairState& b2 = basis.b2_in.at_index(i);
    // alpha and beta as value matrices: columns are the seeded solutions.
    const Mat2 alpha{a1.g1, a2.g1, a1.g2, a2.g2};
    const Mat2 beta{b1.g1, b2.g1, b1.g2, b2.g2};
    const double det = beta.det();
    const double scale = std::max({std::abs(beta.a11) * std::abs(beta.a22),
                                   std::abs(beta.a12) * std::abs(beta.a21),
                                   1e-300});
    if (std::abs(det) < min_det * scale) continue;  // near-singular wall

    // lambda = -beta^{-1} alpha
    Eval e;
    e.lam.a11 = -(beta.a22 * alpha.a11 - beta.a12 * alpha.a21) / det;
    e.lam.a12 = -(beta.a22 * alpha.a12 - beta.a12 * alpha.a22) / det;
    e.lam.a21 = -(beta.a11 * alpha.a21 - beta.a21 * alpha.a11) / det;
    e.lam.a22 = -(beta.a11 * alpha.a22 - beta.a21 * alpha.a12) / det;
    if (basis.has_drive) {
      const PairState& sg = basis.sg_in.at_index(i);
      e.lv1 = -(beta.a22 * sg.g1 - beta.a12 * sg.g2) / det;
      e.lv2 = -(beta.a11 * sg.g2 - beta.a21 * sg.g1) / det;
    } else {
      e.lv1 = e.lv2 = 0.0;
    }
    evals.push_back(e);
    eps_used.push_back(g.r[i]);
  }
  if (evals.size() < 2)
    throw std::runtime_error("origin_limits: slope basis singular at the wall");

  // Pick the wall where consecutive differences bottom out.
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_i = evals.size() - 1;
  for (std::size_t i = 1; i < evals.size(); ++i) {
    const Eval& p = evals[i - 1];
    const Eval& q = evals[i];
    const double diff = std::max(
        {std::abs(p.lam.a11 - q.lam.a11), std::abs(p.lam.a12 - q.lam.a12),
         std::abs(p.lam.a21 - q.lam.a21), std::abs(p.lam.a22 - q.lam.a22),
         std::abs(p.lv1 - q.lv1), std::abs(p.lv2 - q.lv2)});
    if (diff < best) {
      best = diff;
      best_i = i;
    }
  }

  OriginLimits lim;
  lim.lambda_mat = evals[best_i].lam;
  lim.lambda_vec[0] = evals[best_i].lv1;
  lim.lambda_vec[1] = evals[best_i].lv2;
  lim.eps = eps_used[best_i];
  lim.residual = best;
  const double scale = std::max(
      {1.0, std::abs(lim.lambda_mat.a11), std::abs(lim.lambda_mat.a12),
       std::abs(lim.lambda_mat.a21), std::abs(lim.lambda_mat.a22)});
  lim.converged = (best <= tol * scale);
  return lim;
}

ExchangeConstants exchange_constants(const RadialGrid& g,
                                     const CanonicalBasis& basis,
                                     const OriginLimits& lim, double k) {
  ExchangeConstants ex;
  if (!basis.has_drive) return ex;

  // q runs from r0 in both directions; the full integral over
  // [r_min, r_cut] is q_out(r_cut) - q_in(r_min).
  auto overlap = [&](const SampledPair& out, const SampledPair& in) {
    return out.at_index(g.i_cut).q - in.at_index(0).q;
  };
  const double qa1 = overlap(basis.a1_out, basis.a1_in);
  const double qa2 = overlap(basis.a2_out, basis.a2_in);
  const double qb1 = overlap(basis.b1_out, basis.b1_in);
  const double qb2 = overlap(basis.b2_out, basis.b2_in);
  const double qsg = overlap(basis.sg_out, basis.sg_in);

  const Mat2& L = lim.lambda_mat;
  ex.i1 = qa1 + L.a11 * qb1 + L.a21 * qb2;
  ex.i2 = qa2 + L.a12 * qb1 + L.a22 * qb2;
  ex.j = lim.lambda_vec[0] * qb1 + lim.lambda_vec[1] * qb2 + qsg;

  const double mu = k * k - kBoundEnergy1s;
  const double denom = 1.0 - mu * ex.j;
  if (std::abs(denom) < 1e-10)
    throw std::runtime_error(
        "exchange_constants: self-consistency denominator vanishes");
  ex.a1 = mu * ex.i1 / denom;
  ex.a2 = mu * ex.i2 / denom;
  return ex;
}

ChannelRatio asymptotic_ratio(const RadialGrid& g, const CanonicalBasis& basis,
                              const OriginLimits& lim,
                              const ExchangeConstants& ex, int l, int window,
                              double tol) {
  if (window < 2) throw std::invalid_argument("asymptotic_ratio: window < 2");
  if (g.i_cut + 1 < static_cast<std::size_t>(window))
    throw std::invalid_argument("asymptotic_ratio: window exceeds mesh");

  const Mat2& L = lim.lambda_mat;
  const double l1 = lim.lambda_vec[0], l2 = lim.lambda_vec[1];
  const SampledPair* sg = basis.has_drive ? &basis.sg_out : nullptr;

  // Growth coefficient of the second channel: annihilates r^{-l} exactly.
  auto growth = [&](const PairState& s, double r) {
    return (l * s.g2 / r + s.d2) / ((2.0 * l + 1.0) * std::pow(r, l));
  };

  std::vector<double> dvals(window);
  for (int w = 0; w < window; ++w) {
    const std::size_t i = g.i_cut - window + 1 + w;
    const double r = g.r[i];
    // phi column 1 + A1 * gamma  and  phi column 2 + A2 * gamma
    const PairState n = combine(basis.a1_out, basis.b1_out, basis.b2_out, sg,
                                1.0, L.a11 + ex.a1 * l1, L.a21 + ex.a1 * l2,
                                ex.a1, i);
    const PairState d = combine(basis.a2_out, basis.b1_out, basis.b2_out, sg,
                                1.0, L.a12 + ex.a2 * l1, L.a22 + ex.a2 * l2,
                                ex.a2, i);
    const double cn = growth(n, r);
    const double cd = growth(d, r);
    if (cd == 0.0)
      throw std::runtime_error("asymptotic_ratio: degenerate growth basis");
    dvals[w] = -cn / cd;
  }

  ChannelRatio out;
  out.value = dvals.back();
  const auto [lo, hi] = std::minmax_element(dvals.begin(), dvals.end());
  const double mid = std::abs(dvals[dvals.size() / 2]);
  out.spread = (*hi - *lo) / std::max(mid, 1e-30);
  out.converged = std::isfinite(out.value) && (out.spread <= tol);
  return out;
}

ChannelSolution assemble_channel(const RadialGrid& g,
                                 const CanonicalBasis& basis,
                                 const OriginLimits& lim,
                                 const ExchangeConstants& ex,
                                 const ChannelRatio& ratio) {
  const Mat2& L = lim.lambda_mat;
  const double l1 = lim.lambda_vec[0], l2 = lim.lambda_vec[1];
  const double D = ratio.value;

  ChannelSolution sol;
  sol.amp = ex.a1 + D * ex.a2;
  sol.ratio = D;
  sol.ratio_spread = ratio.spread;
  sol.origin_eps = lim.eps;
  sol.origin_residual = lim.residual;
  sol.origin_converged = lim.converged;
  sol.ratio_converged = ratio.converged;

  const std::size_t n = g.r.size();
  sol.f1.resize(n);
  sol.d1.resize(n);
  sol.f2.resize(n);
  sol.d2.resize(n);

  // f = phi_col1 + D phi_col2 + amp gamma
  //   = a1 + D a2 + (L11 + D L12 + amp l1) b1 + (L21 + D L22 + amp l2) b2
  //     + amp sg
  const double cb1 = L.a11 + D * L.a12 + sol.amp * l1;
  const double cb2 = L.a21 + D * L.a22 + sol.amp * l2;

  for (std::size_t i = 0; i < n; ++i) {
    const bool inward = i < g.i_r0;
    const SampledPair& a1 = inward ? basis.a1_in : basis.a1_out;
    const SampledPair& a2 = inward ? basis.a2_in : basis.a2_out;
    const SampledPair& b1 = inward ? basis.b1_in : basis.b1_out;
    const SampledPair& b2 = inward ? basis.b2_in : basis.b2_out;
    const SampledPair* sg = basis.has_drive
                                ? (inward ? &basis.sg_in : &basis.sg_out)
                                : nullptr;
    PairState s = combine(a1, b1, b2, sg, 1.0, cb1, cb2, sol.amp, i);
    const PairState& s2 = a2.at_index(i);
    s.g1 += D * s2.g1;
    s.d1 += D * s2.d1;
    s.g2 += D * s2.g2;
    s.d2 += D * s2.d2;
    sol.f1[i] = s.g1;
    sol.d1[i] = s.d1;
    sol.f2[i] = s.g2;
    sol.d2[i] = s.d2;
  }
  return sol;
}

ChannelSolution solve_channel(const RadialGrid& g, const ChannelSpec& ch,
                              const CanonicalOptions& opt) {
  const CanonicalBasis basis = build_basis(g, ch, opt.ivp);
  const OriginLimits lim = origin_limits(g, basis, opt.origin_tol);
  const ExchangeConstants ex = exchange_constants(g, basis, lim, ch.k);
  const ChannelRatio ratio =
      asymptotic_ratio(g, basis, lim, ex, ch.l, opt.ratio_window, opt.ratio_tol);
  return assemble_channel(g, basis, lim, ex, ratio);
}

}  // namespace cfwave
