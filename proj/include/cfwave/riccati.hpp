#pragma once

namespace cfwave {

// Riccati-Bessel pair at order l and argument x:
//   s_l(x) = x j_l(x)   regular at the origin, ~ x^{l+1}/(2l+1)!!
//   c_l(x) = -x y_l(x)  irregular,             ~ (2l-1)!!/x^l
// For large x they tend to sin(x - l pi/2) and cos(x - l pi/2).
// Derivatives are with respect to x.  The pair satisfies the Wronskian
// identity s c' - s' c = -1 for all l and x.
struct RiccatiPair {
  double s;
  double c;
  double sp;
  double cp;
};

// Evaluate the pair and its first derivatives.
// Throws std::domain_error for l < 0 or x <= 0 and std::overflow_error when
// c_l leaves the double range (tiny argument at high order).
RiccatiPair riccati_bessel(int l, double x);

}  // namespace cfwave
