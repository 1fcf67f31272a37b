#pragma once

namespace lpwidths::specfun {

// Parameters of the exponential tail integral  int_delta^inf u^alpha e^-u du.
struct TailBoundCase {
  double alpha = 0.0;
  double delta = 1.0;  // must be > 0
};

/// Dimension profile for the shape-1/n regularized incomplete gamma map
/// y(omega) = P(1/n, omega) and its inverse.  Stores the total mass
/// gamma_n = Gamma(1/n) so repeated inversions do not recompute it.
class IncGammaProfile {
 public:
  explicit IncGammaProfile(int n);
  // Validates a caller-supplied total mass against Gamma(1/n) (1e-12 relative).
  IncGammaProfile(int n, double gamma_n);

  int n() const { return n_; }
  double gamma_n() const { return gamma_n_; }

 private:
  int n_;
  double gamma_n_;
};

// ln Gamma(s) for s > 0.  Relative accuracy ~1e-14 on the log scale.
double log_gamma(double s);

// Psi(s) = d/ds ln Gamma(s) for s > 0, absolute error <= 1e-10 on [1e-2, 1e6].
double digamma(double s);

// Lower regularized incomplete gamma P(a, x), a > 0, x >= 0.
double reg_lower_inc_gamma(double a, double x);

// Inverse of y = P(1/n, omega) in omega.  Solves to |P(1/n,omega) - y| <= 1e-11.
// Throws std::range_error for y = 1 and when the true inverse underflows the
// double range (possible for large n and small y, where omega ~ y^n).
double inv_y_to_omega(const IncGammaProfile& profile, double y);

// Upper bound on int_delta^inf u^alpha e^-u du.  The case split excludes the
// boundary alpha = delta (alpha > 0), which is reported as a domain error.
double tail_bound(const TailBoundCase& c);

namespace detail {

// Upper regularized Q(a, x).  Relative accuracy in the far tail (x > a + 1).
double reg_upper_inc_gamma(double a, double x);

// Solve Q(a, omega) = exp(log_q) for omega, given the tail mass in log form.
// Accurate for arbitrarily small tail masses; used by the width quadrature.
double inv_log_q_to_omega(double a, double log_q);

// Non-throwing inverse of P(1/n, .): returns 0 when the true inverse
// underflows the double range (its contribution to any integrand vanishes).
double inv_y_to_omega_or_zero(double a, double y);

}  // namespace detail

}  // namespace lpwidths::specfun
