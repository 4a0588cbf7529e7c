#include "cfwave/phaseshift.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cfwave/ode.hpp"
#include "cfwave/riccati.hpp"

namespace cfwave {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Node counting is restricted to r >= 0.25 with a relative amplitude floor.
// Below 0.25 the local momentum integral of the electron-hydrogen channels
// stays under pi, so the regular solution cannot have a node there, while
// the assembled wave still carries irregular-admixture noise near the wall
// whose sign is meaningless.  The floor removes that noise: samples next to
// a genuine node sit at |f| ~ k h |f|_max >~ 1e-4 |f|_max, far above it.
constexpr double kNodeTrustRadius = 0.25;
constexpr double kNodeFloor = 1e-6;

// Sine/cosine amplitudes of f against the free pair at one radius.
// Solving [s c; k s' k c'] [a_s a_c]^T = [f f']^T with Wronskian -k.
void free_amplitudes(double k, int l, double r, double f, double fp,
                     double* a_s, double* a_c) {
  const RiccatiPair p = riccati_bessel(l, k * r);
  *a_s = (p.c * fp - k * p.cp * f) / k;
  *a_c = (k * p.sp * f - p.s * fp) / k;
}

// Count strict sign changes of u over grid indices [i_from, i_to], ignoring
// samples below the relative amplitude floor (wall noise, underflow).
int count_nodes(const std::vector<double>& u, std::size_t u_begin,
                std::size_t i_from, std::size_t i_to) {
  if (i_from > i_to) return 0;
  double umax = 0.0;
  for (std::size_t i = i_from; i <= i_to; ++i)
    umax = std::max(umax, std::abs(u[i - u_begin]));
  const double floor = kNodeFloor * umax;
  int m = 0;
  double prev = 0.0;
  for (std::size_t i = i_from; i <= i_to; ++i) {
    const double v = u[i - u_begin];
    if (std::abs(v) <= floor) continue;
    if (prev != 0.0 && v * prev < 0.0) ++m;
    prev = v;
  }
  return m;
}

struct WindowFit {
  std::vector<double> phase;  // unwrapped atan2(a_c, a_s) per sample
  double spread = 0.0;
  double a_s = 0.0, a_c = 0.0;
  std::size_t i_end = 0;
};

WindowFit fit_window(const RadialGrid& g, const std::vector<double>& f,
                     const std::vector<double>& df, std::size_t i_begin,
                     double flip, double k, int l, std::size_t i_end,
                     int window) {
  WindowFit w;
  w.i_end = i_end;
  w.phase.reserve(static_cast<std::size_t>(window));
  double lo = 0.0, hi = 0.0;
  for (int j = window - 1; j >= 0; --j) {
    const std::size_t i = i_end - static_cast<std::size_t>(j);
    const double fv = flip * f[i - i_begin];
    const double fpv = flip * (df.empty() ? mesh_derivative(g, f, i_begin, i)
                                          : df[i - i_begin]);
    double as = 0.0, ac = 0.0;
    free_amplitudes(k, l, g.r[i], fv, fpv, &as, &ac);
    double p = std::atan2(ac, as);
    if (!w.phase.empty()) {
      const double prev = w.phase.back();
      p += 2.0 * kPi * std::round((prev - p) / (2.0 * kPi));
    }
    w.phase.push_back(p);
    if (w.phase.size() == 1) {
      lo = hi = p;
    } else {
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    if (j == 0) {
      w.a_s = as;
      w.a_c = ac;
    }
  }
  w.spread = hi - lo;
  return w;
}

// Accumulated oscillation angle at i_end: theta = m*pi + w with w in (0, pi)
// read off from (k u, u') after the parity of the node count is folded in.
double winding_angle(double k, int m, double u, double up) {
  const double par = (m % 2 == 0) ? 1.0 : -1.0;
  double w = std::atan2(par * k * u, par * up);
  // Noise at an endpoint node: keep w in (-pi/2, 3pi/2) so a node crossed
  // just before the endpoint reads ~0 and one just after reads ~pi.
  if (w < -0.5 * kPi) w += 2.0 * kPi;
  return static_cast<double>(m) * kPi + w;
}

}  // namespace

double q_function(double k, int l, double r, double f, double fp) {
  const RiccatiPair a = riccati_bessel(l, k * r);
  const RiccatiPair b = riccati_bessel(l + 1, k * r);
  const double slope = fp - (static_cast<double>(l + 1) / r) * f;
  const double num = slope * a.s + k * f * b.s;
  const double den = slope * a.c + k * f * b.c;
  return -num / den;
}

PhaseResult extract_phase(const RadialGrid& g, const std::vector<double>& f,
                          const std::vector<double>& df, std::size_t i_begin,
                          double k, int l, double nodes_from_r,
                          const PhaseOptions& opt) {
  if (!(k > 0.0)) throw std::invalid_argument("momentum must be positive");
  if (l < 0) throw std::invalid_argument("negative angular momentum");
  if (opt.window < 2) throw std::invalid_argument("window needs >= 2 samples");
  if (f.empty() || i_begin + f.size() > g.r.size())
    throw std::invalid_argument("samples do not fit the grid");
  if (!df.empty() && df.size() != f.size())
    throw std::invalid_argument("slope array length mismatch");

  const std::size_t i_last = i_begin + f.size() - 1;
  const std::size_t need = static_cast<std::size_t>(opt.window - 1);

  // Launch sign: first sample past the trust radius whose amplitude clears
  // the noise floor.  The wave reaches its first antinode before its first
  // node, so this sample always precedes any node.
  const double trust_r = std::max(nodes_from_r, kNodeTrustRadius);
  std::size_t i_from = static_cast<std::size_t>(
      std::lower_bound(g.r.begin(), g.r.end(), trust_r) - g.r.begin());
  i_from = std::max(i_from, i_begin);
  if (i_from > i_last)
    throw std::invalid_argument("node range starts past the samples");
  double fmax = 0.0;
  for (std::size_t i = i_from; i <= i_last; ++i)
    fmax = std::max(fmax, std::abs(f[i - i_begin]));
  if (fmax == 0.0) throw std::runtime_error("wave is identically zero");
  double flip = 0.0;
  for (std::size_t i = i_from; i <= i_last; ++i) {
    const double v = f[i - i_begin];
    if (std::abs(v) > kNodeFloor * fmax) {
      flip = v > 0.0 ? 1.0 : -1.0;
      break;
    }
  }

  // Candidate matching windows: one ending at the exchange cutoff, one at
  // the far end of the mesh.  Keep whichever plateau is flatter.
  std::vector<std::size_t> ends;
  if (g.i_cut >= i_begin + need && g.i_cut <= i_last)
    ends.push_back(g.i_cut);
  if (i_last >= i_begin + need && (ends.empty() || i_last != ends.front()))
    ends.push_back(i_last);
  if (ends.empty())
    throw std::invalid_argument("matching window does not fit the samples");

  WindowFit best;
  bool have = false;
  for (std::size_t e : ends) {
    WindowFit w = fit_window(g, f, df, i_begin, flip, k, l, e, opt.window);
    if (!have || w.spread < best.spread) {
      best = std::move(w);
      have = true;
    }
  }

  // Absolute branch from the accumulated oscillation relative to the free
  // wave: both solutions wind from zero angle at the origin.
  const std::size_t e = best.i_end;
  std::vector<double> sfree(e - i_from + 1, 0.0);
  for (std::size_t i = i_from; i <= e; ++i)
    sfree[i - i_from] = riccati_bessel(l, k * g.r[i]).s;
  const int m = count_nodes(f, i_begin, i_from, e);
  const int m_free = count_nodes(sfree, i_from, i_from, e);

  const double fe = flip * f[e - i_begin];
  const double fpe = flip * (df.empty() ? mesh_derivative(g, f, i_begin, e)
                                        : df[e - i_begin]);
  const RiccatiPair pe = riccati_bessel(l, k * g.r[e]);
  const double theta = winding_angle(k, m, fe, fpe);
  const double theta_free = winding_angle(k, m_free, pe.s, k * pe.sp);
  const double delta_node = theta - theta_free;

  PhaseResult out;
  const double p_last = best.phase.back();
  out.delta =
      p_last + 2.0 * kPi * std::round((delta_node - p_last) / (2.0 * kPi));
  out.a_s = best.a_s;
  out.a_c = best.a_c;
  out.tan_delta = best.a_c / best.a_s;
  out.branch =
      static_cast<int>(std::llround((out.delta - std::atan(out.tan_delta)) / kPi));
  out.plateau_spread = best.spread;
  out.converged = best.spread <= opt.tol;
  out.norm_factor =
      flip * std::sqrt(2.0 / kPi) / std::hypot(best.a_s, best.a_c);
  out.r_match = g.r[e];
  return out;
}

}  // namespace cfwave
