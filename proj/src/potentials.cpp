#include "cfwave/potentials.hpp"

#include <cmath>
#include <stdexcept>

namespace cfwave {
namespace {

// Saturation bracket of the polarization potential:
//   B(r) = 1 - e^{-2r} (1 + 2r + 2r^2 + (4/3) r^3 + (2/3) r^4 + (4/27) r^5)
// For r -> 0 the bracket vanishes like r^5, so evaluating it directly costs
// ~5 log10(1/r) digits.  Power-series coefficients of B through r^16 (the
// r^9 term is exactly zero); relative truncation error at the branch switch
// r = 0.25 is ~6e-13, matching what the closed form achieves there.
constexpr double kBracketCoeff[12] = {
    0.1185185185185185185,     // r^5   =  16/135
    -0.1481481481481481481,    // r^6   = -4/27
    0.08465608465608465609,    // r^7   =  16/189
    -0.02469135802469135802,   // r^8   = -2/81
    0.0,                       // r^9
    0.003950617283950617284,   // r^10  =  8/2025
    -0.002394313505424616536,  // r^11  = -32/13365
    0.0009406231628453850676,  // r^12  =  8/8505
    -0.0002894225116447338670, // r^13  = -32/110565
    7.465263197185595775e-5,   // r^14  =  8/107163
    -1.672218956169573454e-5,  // r^15  = -32/1913625
    3.325435424200856300e-6,   // r^16  =  2/601425
};

double bracket_series(double r) {
  double sum = 0.0;
  for (int n = 11; n >= 0; --n) sum = kBracketCoeff[n] + r * sum;
  return sum * r * r * r * r * r;
}

double bracket_direct(double r) {
  const double p = 1.0 + r * (2.0 + r * (2.0 + r * (4.0 / 3.0 +
                   r * (2.0 / 3.0 + r * (4.0 / 27.0)))));
  return 1.0 - std::exp(-2.0 * r) * p;
}

}  // namespace

double bound_radial_1s(double r) { return 2.0 * r * std::exp(-r); }

double static_potential(double r) {
  if (!(r > 0.0)) throw std::domain_error("static_potential: r must be > 0");
  return -2.0 * (1.0 + 1.0 / r) * std::exp(-2.0 * r);
}

double polarization_potential(double r) {
  if (r < 0.0) throw std::domain_error("polarization_potential: r must be >= 0");
  if (r == 0.0) return 0.0;
  if (r < 0.25) return -4.5 * bracket_series(r) / (r * r * r * r);
  return -4.5 * bracket_direct(r) / (r * r * r * r);
}

double local_exchange_magnitude(ExchangeModel model, double k, double r) {
  if (model == ExchangeModel::none) return 0.0;
  const double x = (model == ExchangeModel::fmcc)
                       ? k * k - static_potential(r)
                       : k * k;
  // |W| = ( sqrt(x^2 + 16 e^{-2r}) - x ) / 2, written to stay accurate when
  // the exponential term is tiny compared to x^2.
  const double e = 16.0 * std::exp(-2.0 * r);
  return 0.5 * e / (std::sqrt(x * x + e) + x);
}

double local_exchange(double r, const ChannelSpec& ch, ExchangeModel model) {
  if (!(r > 0.0)) throw std::domain_error("local_exchange: r must be > 0");
  if (ch.spin != 0 && ch.spin != 1)
    throw std::domain_error("local_exchange: spin must be 0 or 1");
  if (model == ExchangeModel::none) return 0.0;
  return spin_sign(ch.spin) * local_exchange_magnitude(model, ch.k, r);
}

CoeffSample coupled_coefficients(const ChannelSpec& ch, double r) {
  if (!(r > 0.0)) throw std::domain_error("coupled_coefficients: r must be > 0");
  if (ch.l < 0) throw std::domain_error("coupled_coefficients: l must be >= 0");
  if (ch.spin != 0 && ch.spin != 1)
    throw std::domain_error("coupled_coefficients: spin must be 0 or 1");

  const double cf = static_cast<double>(ch.l) * (ch.l + 1) / (r * r);
  const double u1s = bound_radial_1s(r);
  const double sign = spin_sign(ch.spin);

  CoeffSample c;
  c.v11 = ch.k * ch.k - static_potential(r) -
          (ch.polarization ? polarization_potential(r) : 0.0) - cf;
  c.v22 = -cf;
  if (ch.exchange) {
    // Spin factors: the rearrangement coupling carries (-1)^{S+1}, the
    // separable driving carries (-1)^{S+1} as well.  Singlet (S = 0) then
    // couples with a negative sign, which is what reproduces the known
    // scattering lengths (5.97 singlet, 1.77 triplet at threshold).
    c.v12 = -sign * u1s * (2.0 / r) / (2.0 * ch.l + 1.0);
    c.v21 = (2.0 * ch.l + 1.0) / r * u1s;
    // The separable driving survives only for s-waves; for l > 0 the overlap
    // with the spherically symmetric bound orbital vanishes.
    c.w1 = (ch.l == 0) ? -sign * u1s : 0.0;
  } else {
    c.v12 = c.v21 = c.w1 = 0.0;
  }
  return c;
}

}  // namespace cfwave
