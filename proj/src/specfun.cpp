#include "lpwidths/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "lpwidths/errors.hpp"

namespace lpwidths::specfun {

namespace {

constexpr int kMaxSeriesIter = 2000;

void require(bool cond, const char* msg) {
  if (!cond) throw std::domain_error(msg);
}

}  // namespace

double log_gamma(double s) {
  require(std::isfinite(s) && s > 0.0, "log_gamma: argument must be finite and > 0");
  // Lanczos approximation, g = 607/128, 14 coefficients (Pugh / NR3 set).
  static const double cof[14] = {
      57.1562356658629235,     -59.5979603554754912,
      14.1360979747417471,     -0.491913816097620199,
      0.339946499848118887e-4,  0.465236289270485756e-4,
      -0.983744753048795646e-4, 0.158088703224912494e-3,
      -0.210264441724104883e-3, 0.217439618115212643e-3,
      -0.164318106536763890e-3, 0.844182239838527433e-4,
      -0.261908384015814087e-4, 0.368991826595316234e-5};
  double x = s;
  double tmp = x + 5.24218750000000000;  // x + g + 1/2
  tmp = (x + 0.5) * std::log(tmp) - tmp;
  double ser = 0.999999999999997092;
  double y = x;
  for (int j = 0; j < 14; ++j) ser += cof[j] / ++y;
  return tmp + std::log(2.5066282746310005 * ser / x);
}

double digamma(double s) {
  require(std::isfinite(s) && s > 0.0, "digamma: argument must be finite and > 0");
  // Recurrence Psi(s) = Psi(s+1) - 1/s until s >= 10, then the asymptotic
  // series with Bernoulli coefficients through B14.
  double result = 0.0;
  double x = s;
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // B2/2 x^-2, B4/4 x^-4, ...
  const double series = inv2 * (1.0 / 12.0 +
                        inv2 * (-1.0 / 120.0 +
                        inv2 * (1.0 / 252.0 +
                        inv2 * (-1.0 / 240.0 +
                        inv2 * (1.0 / 132.0 +
                        inv2 * (-691.0 / 32760.0 +
                        inv2 * (1.0 / 12.0)))))));
  result += std::log(x) - 0.5 * inv - series;
  return result;
}

namespace {

// Lower incomplete gamma by its power series, x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int i = 0; i < kMaxSeriesIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * std::numeric_limits<double>::epsilon())
      return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
  }
  throw NumericalError("reg_lower_inc_gamma: series did not converge");
}

// Upper incomplete gamma by modified Lentz continued fraction, x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double fpmin = std::numeric_limits<double>::min() / eps;
  double b = x + 1.0 - a;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxSeriesIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) <= eps)
      return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
  }
  throw NumericalError("reg_lower_inc_gamma: continued fraction did not converge");
}

// Density of the shape-a gamma law at x, d/dx P(a, x).
double gamma_density(double a, double x) {
  if (x <= 0.0) return 0.0;
  return std::exp((a - 1.0) * std::log(x) - x - log_gamma(a));
}

}  // namespace

double reg_lower_inc_gamma(double a, double x) {
  require(std::isfinite(a) && a > 0.0, "reg_lower_inc_gamma: shape must be finite and > 0");
  require(std::isfinite(x) && x >= 0.0, "reg_lower_inc_gamma: argument must be finite and >= 0");
  if (x == 0.0) return 0.0;
  // Series below the a+1 crossover, continued fraction above.
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double detail::reg_upper_inc_gamma(double a, double x) {
  require(std::isfinite(a) && a > 0.0, "reg_upper_inc_gamma: shape must be finite and > 0");
  require(std::isfinite(x) && x >= 0.0, "reg_upper_inc_gamma: argument must be finite and >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

IncGammaProfile::IncGammaProfile(int n) : n_(n) {
  require(n >= 1, "IncGammaProfile: dimension must be >= 1");
  gamma_n_ = std::exp(log_gamma(1.0 / n));
}

IncGammaProfile::IncGammaProfile(int n, double gamma_n) : n_(n), gamma_n_(gamma_n) {
  require(n >= 1, "IncGammaProfile: dimension must be >= 1");
  const double ref = std::exp(log_gamma(1.0 / n));
  if (!(std::abs(gamma_n - ref) <= 1e-12 * ref))
    throw std::invalid_argument("IncGammaProfile: gamma_n inconsistent with Gamma(1/n)");
}

namespace {

// Shared safeguarded Newton solve of P(a, omega) = y on a bracket.
// Returns NaN when the true inverse lies below the double range.
double solve_p_inverse(double a, double y) {
  const double target_resid = 1e-13;
  // Analytic seed from P(a,w) ~ w^a / Gamma(a+1) for small w; doubles as the
  // underflow detector (the density is singular at 0 for a < 1, so a
  // derivative-only iteration from 0 would be unsafe).
  const double log_seed = (std::log(y) + log_gamma(1.0 + a)) / a;
  if (log_seed < std::log(1e-300)) {
    if (reg_lower_inc_gamma(a, 1e-300) > y) return std::numeric_limits<double>::quiet_NaN();
  }

  double lo = 0.0, hi = 1.0;
  int grow = 0;
  while (reg_lower_inc_gamma(a, hi) < y) {
    hi *= 2.0;
    if (++grow > 1100) throw NumericalError("inv_y_to_omega: bracket growth failed");
  }
  double w = (log_seed < std::log(0.25)) ? std::exp(log_seed) : 0.5 * hi;
  if (!(w > lo && w < hi)) w = 0.5 * hi;

  for (int it = 0; it < 300; ++it) {
    const double f = reg_lower_inc_gamma(a, w) - y;
    if (std::abs(f) <= target_resid) return w;
    if (f < 0.0) lo = w; else hi = w;
    double nxt;
    const double dens = gamma_density(a, w);
    if (w < 1e-4 && dens * w > 0.0 && std::isfinite(dens * w)) {
      // Newton in log(omega); the linear step collapses against the
      // singular density when omega is tiny.
      nxt = w * std::exp(-f / (dens * w));
    } else if (dens > 0.0 && std::isfinite(dens)) {
      nxt = w - f / dens;
    } else {
      nxt = 0.5 * (lo + hi);
    }
    if (!(nxt > lo && nxt < hi)) nxt = 0.5 * (lo + hi);
    if (nxt == w) break;
    w = nxt;
  }
  if (std::abs(reg_lower_inc_gamma(a, w) - y) <= 1e-11) return w;
  throw NumericalError("inv_y_to_omega: did not reach residual target");
}

}  // namespace

double inv_y_to_omega(const IncGammaProfile& profile, double y) {
  require(std::isfinite(y) && y >= 0.0 && y <= 1.0, "inv_y_to_omega: y must lie in [0, 1)");
  if (y == 1.0) throw std::range_error("inv_y_to_omega: omega diverges at y = 1");
  if (y == 0.0) return 0.0;
  const double w = solve_p_inverse(1.0 / profile.n(), y);
  if (std::isnan(w))
    throw std::range_error("inv_y_to_omega: inverse underflows the double range");
  return w;
}

double detail::inv_y_to_omega_or_zero(double a, double y) {
  if (y <= 0.0) return 0.0;
  const double w = solve_p_inverse(a, y);
  return std::isnan(w) ? 0.0 : w;
}

double detail::inv_log_q_to_omega(double a, double log_q) {
  require(std::isfinite(a) && a > 0.0, "inv_log_q_to_omega: shape must be > 0");
  require(log_q < 0.0, "inv_log_q_to_omega: tail mass must be < 1");
  // Asymptotic seed from log Q ~ (a-1) log w - w - log Gamma(a).
  const double lga = log_gamma(a);
  double w = std::max(1.0, -log_q);
  for (int i = 0; i < 4; ++i)
    w = std::max(0.5, -log_q - lga + (a - 1.0) * std::log(std::max(w, 0.5)));

  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    const double q = detail::reg_upper_inc_gamma(a, w);
    // Relative residual in the tail mass; Q is evaluated by a continued
    // fraction there, so full relative accuracy is available.
    const double f = std::log(q) - log_q;
    if (std::abs(f) <= 1e-12) return w;
    if (f > 0.0) lo = w; else hi = w;  // Q decreasing in w
    const double dens = gamma_density(a, w);
    double nxt = w + f * q / std::max(dens, std::numeric_limits<double>::min());
    if (!(nxt > lo && nxt < hi) || !std::isfinite(nxt))
      nxt = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * std::max(w, 1.0);
    if (nxt == w) break;
    w = nxt;
  }
  const double q = detail::reg_upper_inc_gamma(a, w);
  if (std::abs(std::log(q) - log_q) <= 1e-9) return w;
  throw NumericalError("inv_log_q_to_omega: did not converge");
}

double tail_bound(const TailBoundCase& c) {
  require(std::isfinite(c.alpha), "tail_bound: alpha must be finite");
  require(std::isfinite(c.delta) && c.delta > 0.0, "tail_bound: delta must be finite and > 0");
  const double base = std::exp(c.alpha * std::log(c.delta) - c.delta);
  if (c.alpha <= 0.0) return base;
  const double r = c.alpha / c.delta;
  if (c.alpha == c.delta)
    throw std::domain_error("tail_bound: the case split excludes alpha = delta");
  if (r < 1.0) return base / (1.0 - r);
  return base * std::exp(c.alpha * std::log(r)) * r / (1.0 - c.delta / c.alpha);
}

}  // namespace lpwidths::specfun
