#include "lpwidths/analytic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "lpwidths/errors.hpp"
#include "lpwidths/specfun.hpp"

namespace lpwidths::analytic {

using specfun::log_gamma;

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::domain_error(msg);
}

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
constexpr double kGkNodes[8] = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993944,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126,
};
constexpr double kKronrodW[8] = {
    0.2094821410847278, 0.2044329400752989, 0.1903505780647854, 0.1690047266392679,
    0.1406532597155259, 0.1047900103222502, 0.0630920926299786, 0.0229353220105292,
};
// Gauss-7 weights for nodes 0, 2, 4, 6 of the table above.
constexpr double kGaussW[4] = {
    0.4179591836734694, 0.3818300505051189, 0.2797053914892767, 0.1294849661688697,
};

template <class F>
void gk15_panel(const F& f, double a, double b, double& value, double& err) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f0 = f(mid);
  double k15 = kKronrodW[0] * f0;
  double g7 = kGaussW[0] * f0;
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kGkNodes[i];
    const double fi = f(mid + dx) + f(mid - dx);
    k15 += kKronrodW[i] * fi;
    if (i % 2 == 0) g7 += kGaussW[i / 2] * fi;
  }
  value = k15 * half;
  err = std::abs(k15 - g7) * half;
}

template <class F>
double adaptive_gk15(const F& f, double a, double b, double abs_tol, int depth,
                     bool& converged) {
  double value, err;
  gk15_panel(f, a, b, value, err);
  if (err <= abs_tol || depth <= 0) {
    if (err > abs_tol) converged = false;
    return value;
  }
  const double mid = 0.5 * (a + b);
  return adaptive_gk15(f, a, mid, 0.5 * abs_tol, depth - 1, converged) +
         adaptive_gk15(f, mid, b, 0.5 * abs_tol, depth - 1, converged);
}

}  // namespace

BridgeFactor bridge_lemma1(PNorm p, int n) {
  require(!p.is_infinite(), "bridge_lemma1: requires p < inf");
  require(n >= 2, "bridge_lemma1: requires n >= 2");
  const double np = n / p.value();
  return {p, n, std::exp(log_gamma(np) - log_gamma(np + p.reciprocal()))};
}

double theorem17_quadrature(PNorm p, int n, int m) {
  require(!p.is_infinite(), "theorem17_quadrature: requires p < inf");
  require(n >= 2, "theorem17_quadrature: requires n >= 2");
  require(m >= 1 && m <= n, "theorem17_quadrature: requires 1 <= m <= n");

  const double a = 1.0 / n;
  const double inv_p = p.reciprocal();
  const specfun::IncGammaProfile profile(n);
  const double gamma_n = profile.gamma_n();
  const double ln_pref = log_gamma(n + 1.0) - log_gamma(static_cast<double>(m)) -
                         log_gamma(n - m + 1.0) - log_gamma(1.0 + inv_p);

  // Integrand against y on the head region, all factors in log space.
  const auto head = [&](double y) -> double {
    if (y <= 0.0 || y >= 1.0) return 0.0;
    const double w = specfun::detail::inv_y_to_omega_or_zero(a, y);
    if (w <= 0.0) return 0.0;
    return std::exp(ln_pref + (n - m) * std::log(y) + (m - 1) * std::log1p(-y) +
                    inv_p * std::log(w));
  };
  // Tail region under u = -log(1-y); the inverse is solved from the upper
  // tail mass Q(a, omega) = e^-u directly, which stays accurate when y
  // is indistinguishable from 1 in double precision.
  const auto tail = [&](double u) -> double {
    const double log1my = -u;
    const double y = -std::expm1(-u);
    if (y <= 0.0) return 0.0;
    // y(omega) is the regularized P(a, omega), so the tail mass is Q = e^-u.
    const double w = specfun::detail::inv_log_q_to_omega(a, log1my);
    return std::exp(ln_pref + (n - m) * std::log(y) + static_cast<double>(m) * log1my +
                    inv_p * std::log(w));
  };

  // Split where the proof's own case analysis splits: y* = 1 - e^-1/gamma.
  const double split_frac = std::exp(-1.0) / gamma_n;
  const double y_star = 1.0 - split_frac;
  const double u_star = 1.0 + std::log(gamma_n);
  const double rel_tol = 1e-9;

  // Scale guess from a coarse scan; the integrand is smooth and positive.
  double scale = 0.0;
  for (int i = 1; i < 64; ++i) scale = std::max(scale, head(y_star * i / 64.0));
  for (int i = 0; i < 16; ++i) scale = std::max(scale, tail(u_star + 0.25 * i));
  if (scale == 0.0)
    throw NumericalError("theorem17_quadrature: integrand vanished on the scan grid");

  bool converged = true;
  double total = adaptive_gk15(head, 0.0, y_star, 0.25 * rel_tol * scale, 48, converged);
  double panel_tol = 0.25 * rel_tol * std::max(scale, total);
  int quiet_panels = 0;
  for (int k = 0; k < 900 && quiet_panels < 2; ++k) {
    const double piece =
        adaptive_gk15(tail, u_star + k, u_star + k + 1.0, panel_tol, 36, converged);
    total += piece;
    if (std::abs(piece) < 0.5 * panel_tol)
      ++quiet_panels;
    else
      quiet_panels = 0;
  }
  if (!converged || !std::isfinite(total))
    throw NumericalError("theorem17_quadrature: quadrature did not converge (p=" +
                         std::to_string(p.value()) + ", n=" + std::to_string(n) +
                         ", m=" + std::to_string(m) + ")");
  return total;
}

Theorem17Bounds theorem17_bounds(PNorm p, int n, int m) {
  require(!p.is_infinite(), "theorem17_bounds: requires p < inf");
  require(n >= 2, "theorem17_bounds: requires n >= 2");
  require(m >= 1 && m <= n, "theorem17_bounds: requires 1 <= m <= n");
  const double np = n / p.value();
  const double log_head = log_gamma(n + 1.0) - log_gamma(n - m + 1.0);
  const double lower = std::exp(log_head + log_gamma(np + n - m + 1.0) - log_gamma(np + n + 1.0));
  const double log_extra =
      log_head - log_gamma(m + 1.0) + m * (-1.0 - log_gamma(1.0 / n));
  return {lower, lower + std::exp(log_extra)};
}

double BoundEnvelope::operator()(int n, int m) const {
  require(n >= 2, "bound_envelope: requires n >= 2");
  switch (kind) {
    case EnvelopeKind::Thm6Upper:
    case EnvelopeKind::Thm6Lower:
      require(!p.is_infinite(), "bound_envelope: Thm6 shape requires p < inf");
      require(q.is_infinite(), "bound_envelope: Thm6 shape is stated for q = inf");
      require(m >= 0 && m <= n - 1, "bound_envelope: requires 0 <= m <= n-1");
      return constant *
             std::pow((1.0 + std::log(static_cast<double>(n)) - std::log(m + 1.0)) / n,
                      p.reciprocal());
    case EnvelopeKind::Thm9Upper:
      require(!p.is_infinite(), "bound_envelope: Thm9 shape requires p < inf");
      require(q.is_infinite(), "bound_envelope: Thm9 shape is stated for q = inf");
      require(m == 0, "bound_envelope: Thm9 shape is stated for m = 0");
      return constant * std::pow(std::log(n + 1.0) / n, p.reciprocal());
    case EnvelopeKind::Prop12:
      require(!q.is_infinite(), "bound_envelope: Prop12 shape requires q < inf");
      require(p <= q, "bound_envelope: requires p <= q");
      require(m == 0, "bound_envelope: Prop12 shape is stated for m = 0");
      return constant * std::pow(static_cast<double>(n), q.reciprocal() - p.reciprocal());
    case EnvelopeKind::Eq1:
      require(p <= q, "bound_envelope: requires p <= q");
      require(m >= 0, "bound_envelope: requires m >= 0");
      return constant * std::pow(m + 1.0, q.reciprocal() - p.reciprocal());
  }
  throw std::logic_error("bound_envelope: unreachable");
}

double bound_envelope(EnvelopeKind kind, PNorm p, PNorm q, int n, int m) {
  return BoundEnvelope{kind, p, q, 1.0}(n, m);
}

double limit_constant_lemma17() {
  // exp(-0.57721566490153286...)
  return 0.56145948356688517;
}

}  // namespace lpwidths::analytic
