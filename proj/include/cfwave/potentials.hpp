#pragma once

namespace cfwave {

// All energies in Rydberg, lengths in Bohr radii.  A projectile with
// momentum k carries energy k^2 Ry.

// Ground-state radial function u_1s(r) = 2 r e^{-r}, normalized to
// \int u^2 dr = 1, with energy -1 Ry.
double bound_radial_1s(double r);
inline constexpr double kBoundEnergy1s = -1.0;

// Static (Hartree) potential of atomic hydrogen seen by the projectile:
// -2 (1 + 1/r) e^{-2r}.  Attractive everywhere, Coulombic -2/r wall at the
// origin, exponentially small beyond a few Bohr.
double static_potential(double r);

// Dipole polarization potential with short-range saturation.  Behaves as
// -(8/15) r near the origin and -4.5/r^4 asymptotically.  Below r = 0.2 the
// closed form loses all significance to cancellation, so a power series of
// the saturation bracket takes over there (branches agree to ~1e-12).
double polarization_potential(double r);

// Local equivalent-exchange models for the single-channel solvers, derived
// by localizing the exchange kernel with a WKB-like local momentum:
//   fmcc: local momentum includes the static distortion, X(r) = k^2 -
//         static_potential(r)  (Furness-McCarthy form)
//   bn:   same functional form on the asymptotic shell, X = k^2
//         (Bransden-Noble form)
// local_exchange_magnitude returns |W| = (sqrt(X^2 + 16 e^{-2r}) - X) / 2.
enum class ExchangeModel { none, fmcc, bn };
double local_exchange_magnitude(ExchangeModel model, double k, double r);

// (-1)^S: +1 for singlet (S=0), -1 for triplet (S=1).
inline int spin_sign(int spin) { return spin == 0 ? 1 : -1; }

struct ChannelSpec;

// Spin-dependent local potential replacing the non-local exchange operator:
// repulsive branch (+|W|) in the singlet, attractive branch (-|W|) in the
// triplet, zero for model none.  Energy-dependent through k^2.
double local_exchange(double r, const ChannelSpec& ch, ExchangeModel model);

// One scattering channel of the static-exchange-polarization model.
struct ChannelSpec {
  double k;                  // asymptotic momentum
  int l;                     // scattered-wave angular momentum
  int spin;                  // total spin S in {0, 1}
  bool exchange = true;      // couple to the rearranged channel
  bool polarization = true;  // include the polarization potential
};

// Coefficients of the coupled radial system at radius r:
//   f1'' + v11 f1 + v12 f2 = amp * w1
//   f2'' + v22 f2 + v21 f1 = 0
// where amp is fixed self-consistently by the solver.  With exchange off
// the off-diagonal and driving entries vanish and f1 obeys a plain
// single-channel equation.
struct CoeffSample {
  double v11, v12, v21, v22, w1;
};
CoeffSample coupled_coefficients(const ChannelSpec& ch, double r);

}  // namespace cfwave
