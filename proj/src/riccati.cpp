#include "cfwave/riccati.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfwave {
namespace {

constexpr double kOverflowGuard = 1e290;

// Upward recursion x_{n+1} = ((2n+1)/x) x_n - x_{n-1} starting from the
// closed forms at orders 0 and 1.  Stable for c_l at any argument and for
// s_l once x is comfortably above l.  Returns {value_{l-1}, value_l}.
struct UpResult {
  double prev;
  double cur;
};

UpResult recur_up(double x0, double x1, int l, double x, bool guard_overflow) {
  double prev = x0;
  double cur = x1;
  for (int n = 1; n < l; ++n) {
    double next = (2 * n + 1) / x * cur - prev;
    prev = cur;
    cur = next;
    if (guard_overflow && std::abs(cur) > kOverflowGuard) {
      throw std::overflow_error("riccati_bessel: c_" + std::to_string(l) +
                                " overflows at x=" + std::to_string(x));
    }
  }
  return {prev, cur};
}

// Downward (Miller) recursion for s_l when x is small compared to l.  Start
// well above l with an arbitrary tiny seed, recur down to order 0, then fix
// the overall scale against the closed forms s_0, s_1.  The running pair is
// rescaled whenever it threatens to overflow; recorded values follow suit.
UpResult recur_down(int l, double x) {
  const int start = l + 30;
  double above = 0.0;        // order n+1
  double here = 1e-200;      // order n
  double rec_l = 0.0, rec_lm1 = 0.0;
  for (int n = start; n >= 1; --n) {
    double below = (2 * n + 1) / x * here - above;
    if (n - 1 == l) rec_l = below;
    if (n - 1 == l - 1) rec_lm1 = below;
    above = here;
    here = below;
    if (std::abs(here) > kOverflowGuard) {
      above /= kOverflowGuard;
      here /= kOverflowGuard;
      rec_l /= kOverflowGuard;
      rec_lm1 /= kOverflowGuard;
    }
  }
  // here = raw order 0, above = raw order 1
  const double s0 = std::sin(x);
  const double s1 = std::sin(x) / x - std::cos(x);
  // Normalize against whichever closed form is farther from a zero crossing.
  double scale;
  if (std::abs(s0) >= std::abs(s1)) {
    scale = s0 / here;
  } else {
    scale = s1 / above;
  }
  return {rec_lm1 * scale, rec_l * scale};
}

}  // namespace

RiccatiPair riccati_bessel(int l, double x) {
  if (l < 0) throw std::domain_error("riccati_bessel: order must be >= 0");
  if (!(x > 0.0)) throw std::domain_error("riccati_bessel: argument must be > 0");

  const double sx = std::sin(x);
  const double cx = std::cos(x);

  if (l == 0) return {sx, cx, cx, -sx};

  const double s1 = sx / x - cx;
  const double c1 = cx / x + sx;
  if (l == 1) {
    return {s1, c1, sx - s1 / x, cx - c1 / x};
  }

  // c_l: upward recursion is stable in every regime.
  UpResult c = recur_up(cx, c1, l, x, /*guard_overflow=*/true);
  if (std::abs(c.cur) > kOverflowGuard) {
    throw std::overflow_error("riccati_bessel: c_" + std::to_string(l) +
                              " overflows at x=" + std::to_string(x));
  }

  // s_l: upward only when the argument dominates the order, else Miller.
  UpResult s = (x > 1.5 * l) ? recur_up(sx, s1, l, x, /*guard_overflow=*/false)
                             : recur_down(l, x);

  const double sp = s.prev - static_cast<double>(l) / x * s.cur;
  const double cp = c.prev - static_cast<double>(l) / x * c.cur;
  return {s.cur, c.cur, sp, cp};
}

}  // namespace cfwave
