#pragma once

#include <cstddef>
#include <vector>

#include "cfwave/grid.hpp"
#include "cfwave/ode.hpp"
#include "cfwave/potentials.hpp"

namespace cfwave {

struct Mat2 {
  double a11 = 0, a12 = 0, a21 = 0, a22 = 0;
  double det() const { return a11 * a22 - a12 * a21; }
};

// The five independent solutions of the coupled pair, launched from r0 in
// both directions: two value-seeded columns (identity values, zero slopes),
// two slope-seeded columns (zero values, identity slopes), and one driven
// solution with zero initial data and unit driving amplitude.  Any solution
// of the system is a linear combination of these plus the driven part, so
// boundary conditions at the origin and at infinity can be imposed after the
// fact without re-integrating.
struct CanonicalBasis {
  SampledPair a1_out, a2_out, b1_out, b2_out, sg_out;
  SampledPair a1_in, a2_in, b1_in, b2_in, sg_in;
  bool has_drive = false;  // driven solution propagated (s-wave exchange)
};

CanonicalBasis build_basis(const RadialGrid& g, const ChannelSpec& ch,
                           const IvpOptions& opt = {});

// Generic variant for arbitrary coefficient callbacks: homog feeds the four
// seeded columns, driven (with its source terms) the driven solution when
// has_drive is set, and weight attaches the overlap quadrature.
CanonicalBasis build_basis(const RadialGrid& g, const PairCoeffFn& homog,
                           const PairCoeffFn& driven, const WeightFn& weight,
                           bool has_drive, const IvpOptions& opt = {});

// Regularity condition at the origin.  Imposing zero values at a wall point
// eps determines the slopes at r0 of any regular solution:
//   F'(r0) = lambda_mat F(r0) + amp * lambda_vec
// The wall is moved down a geometric sequence of mesh points; the trace
// stops where consecutive differences are smallest, which balances the
// shrinking wall error against the growing loss of significance when the
// irregular components dominate (severe for large l).
struct OriginLimits {
  Mat2 lambda_mat;                 // -beta(eps)^{-1} alpha(eps)
  double lambda_vec[2] = {0, 0};   // -beta(eps)^{-1} sigma(eps)
  double eps = 0;                  // wall radius finally used
  double residual = 0;             // consecutive-difference norm there
  bool converged = false;          // residual <= tol * scale
};

OriginLimits origin_limits(const RadialGrid& g, const CanonicalBasis& basis,
                           double tol = 1e-6, double min_det = 1e-13);

// Overlap integrals of the bound orbital against the regular basis and the
// resulting self-consistent driving amplitudes (s-wave only; all zero
// otherwise):  amp = a1 f1(r0) + a2 f2(r0).
struct ExchangeConstants {
  double i1 = 0, i2 = 0, j = 0;
  double a1 = 0, a2 = 0;
};

ExchangeConstants exchange_constants(const RadialGrid& g,
                                     const CanonicalBasis& basis,
                                     const OriginLimits& lim, double k);

// Mixing ratio f2(r0)/f1(r0) that removes the growing power r^{l+1} from the
// second channel.  The growth coefficient of u is read off through
//   (l u / r + u') / ((2l+1) r^l),
// which annihilates the decaying power r^{-l} identically and settles
// exponentially fast once the coupling R_1s has died off.
struct ChannelRatio {
  double value = 0;
  double spread = 0;      // relative spread across the plateau window
  bool converged = false;
};

ChannelRatio asymptotic_ratio(const RadialGrid& g, const CanonicalBasis& basis,
                              const OriginLimits& lim,
                              const ExchangeConstants& ex, int l,
                              int window = 50, double tol = 1e-8);

// The physical channel functions on the whole mesh for f1(r0) = 1.
struct ChannelSolution {
  std::vector<double> f1, d1, f2, d2;  // indexed like grid.r
  double amp = 0;                      // driving amplitude
  double ratio = 0;
  double ratio_spread = 0;
  double origin_eps = 0;
  double origin_residual = 0;
  bool origin_converged = false;
  bool ratio_converged = false;
};

ChannelSolution assemble_channel(const RadialGrid& g,
                                 const CanonicalBasis& basis,
                                 const OriginLimits& lim,
                                 const ExchangeConstants& ex,
                                 const ChannelRatio& ratio);

struct CanonicalOptions {
  IvpOptions ivp;
  double origin_tol = 1e-6;
  double ratio_tol = 1e-8;
  int ratio_window = 50;
};

// Full pipeline: basis, origin limits, exchange constants, channel ratio,
// assembly.
ChannelSolution solve_channel(const RadialGrid& g, const ChannelSpec& ch,
                              const CanonicalOptions& opt = {});

}  // namespace cfwave
