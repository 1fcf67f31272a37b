#include "lpwidths/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

#include "lpwidths/analytic.hpp"
#include "lpwidths/estimators.hpp"
#include "lpwidths/samplers.hpp"
#include "lpwidths/specfun.hpp"

namespace lpwidths::validation {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Check z_check(std::string name, double z, double limit) {
  Check c;
  c.name = std::move(name);
  c.statistic = z;
  c.passed = std::isfinite(z) && std::abs(z) < limit;
  c.detail = "|z| = " + fmt(std::abs(z)) + " (limit " + fmt(limit) + ")";
  return c;
}

Check band_check(std::string name, double ratio, double limit) {
  Check c;
  c.name = std::move(name);
  c.statistic = ratio;
  c.passed = std::isfinite(ratio) && ratio < limit;
  c.detail = "max/min = " + fmt(ratio) + " (limit " + fmt(limit) + ")";
  return c;
}

// Adaptive Simpson; independent of the Gauss-Kronrod engine in analytic.
double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int depth = 48) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// int_delta^inf u^alpha e^-u du, truncated where the integrand is negligible.
double tail_integral_oracle(double alpha, double delta) {
  const double cut = std::max(delta + 90.0, 6.0 * std::abs(alpha) + 90.0);
  const auto f = [alpha](double u) { return std::exp(alpha * std::log(u) - u); };
  return adaptive_simpson(f, delta, cut, 1e-15);
}

struct StreamCursor {
  RngState base;
  std::uint64_t next = 0;
  RngState take(std::uint64_t count) {
    RngState s{base.seed, base.stream_id + next};
    next += count;
    return s;
  }
};

std::map<int, EstimateResult> run_query(PNorm p, PNorm q, int n, std::vector<int> ms,
                                        const MeasureSpec& measure, std::int64_t samples,
                                        StreamCursor& cur, int workers) {
  WidthQuery query{p, q, n, std::move(ms), measure};
  return estimate_widths(query, samples, cur.take(static_cast<std::uint64_t>(workers)),
                         workers);
}

}  // namespace

bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

MeanSe mc_order_statistic(PNorm p, double beta, int n, int m, std::int64_t samples,
                          RngState seed) {
  if (m < 1 || m > n) throw std::domain_error("mc_order_statistic: requires 1 <= m <= n");
  Rng rng(seed);
  std::vector<double> draws(static_cast<std::size_t>(n));
  MomentAccumulator acc;
  for (std::int64_t s = 0; s < samples; ++s) {
    for (double& d : draws) d = sample_gen_gamma(p, beta, rng);
    std::sort(draws.begin(), draws.end(), std::greater<>());
    acc.add(draws[static_cast<std::size_t>(m - 1)]);
  }
  const double cnt = static_cast<double>(acc.count());
  return {acc.mean(), std::sqrt(acc.m2() / ((cnt - 1.0) * cnt)), acc.count()};
}

MeanSe mc_weighted_product(PNorm p, double beta, int n, std::int64_t samples, RngState seed) {
  Rng rng(seed);
  MomentAccumulator acc;
  for (std::int64_t s = 0; s < samples; ++s) {
    double log_prod = 0.0;
    for (int i = 0; i < n; ++i) log_prod += sample_gen_gamma_log(p, 0.0, rng);
    acc.add(std::exp(beta * log_prod));
  }
  const double cnt = static_cast<double>(acc.count());
  return {acc.mean(), std::sqrt(acc.m2() / ((cnt - 1.0) * cnt)), acc.count()};
}

std::vector<Check> suite_prop10(std::int64_t samples, RngState seed, int workers) {
  std::vector<Check> out;
  StreamCursor cur{seed};
  struct Cfg { double p; bool q_inf; double q; int m; };
  const Cfg cfgs[] = {{1.0, true, 0.0, 0}, {2.0, false, 2.0, 0}, {0.5, true, 0.0, 5}};
  for (const Cfg& c : cfgs) {
    for (int n : {10, 100}) {
      const PNorm p(c.p);
      const PNorm q = c.q_inf ? PNorm::infinity() : PNorm(c.q);
      const RatioCheck rc = ratio_check_prop10(p, q, n, c.m, samples,
                                               cur.take(2ULL * workers), workers);
      std::string name = "prop10 p=" + fmt(c.p) + " q=" + (c.q_inf ? "inf" : fmt(c.q)) +
                         " n=" + std::to_string(n) + " m=" + std::to_string(c.m);
      Check chk = z_check(std::move(name), rc.z_score, 4.0);
      chk.detail += ", ratio = " + fmt(rc.ratio) + " vs " + fmt(n / (n + 1.0));
      out.push_back(std::move(chk));
    }
  }
  return out;
}

std::vector<Check> suite_lemma1(std::int64_t samples, RngState seed, int workers) {
  std::vector<Check> out;
  StreamCursor cur{seed};
  for (double pv : {0.5, 1.0, 2.0}) {
    const PNorm p(pv);
    for (int n : {5, 50}) {
      const auto est = run_query(p, PNorm::infinity(), n, {0, 2}, MeasureSpec::cone(p, n),
                                 samples, cur, workers);
      const analytic::BridgeFactor bridge = analytic::bridge_lemma1(p, n);
      for (int m : {1, 3}) {
        const MeanSe raw = mc_order_statistic(p, 0.0, n, m, samples, cur.take(1));
        const EstimateResult& sphere = est.at(m - 1);
        const double target = bridge.value * raw.mean;
        const double se = std::sqrt(sphere.std_error * sphere.std_error +
                                    bridge.value * bridge.value * raw.se * raw.se);
        const double z = (sphere.mean - target) / se;
        out.push_back(z_check("lemma1 p=" + fmt(pv) + " n=" + std::to_string(n) +
                                  " m=" + std::to_string(m),
                              z, 4.0));
      }
    }
  }
  return out;
}

std::vector<Check> suite_lemma15(std::int64_t samples, RngState seed, int /*workers*/) {
  std::vector<Check> out;
  StreamCursor cur{seed};
  struct Cfg { double p; int n; double beta; };
  for (const Cfg& c : {Cfg{1.0, 3, 0.5}, Cfg{1.0, 3, -0.3}, Cfg{2.0, 2, 1.0}, Cfg{0.5, 2, 0.25}}) {
    const double target = std::exp(
        c.n * (specfun::log_gamma((c.beta + 1.0) / c.p) - specfun::log_gamma(1.0 / c.p)));
    const MeanSe mc = mc_weighted_product(PNorm(c.p), c.beta, c.n, samples, cur.take(1));
    const double z = (mc.mean - target) / mc.se;
    Check chk = z_check("lemma15 p=" + fmt(c.p) + " n=" + std::to_string(c.n) +
                            " beta=" + fmt(c.beta),
                        z, 4.0);
    chk.detail += ", mc = " + fmt(mc.mean) + " vs " + fmt(target);
    out.push_back(std::move(chk));
  }
  return out;
}

std::vector<Check> suite_surface_coincide(std::int64_t samples, RngState seed, int workers) {
  std::vector<Check> out;
  StreamCursor cur{seed};
  const int n = 20;
  for (double pv : {1.0, 2.0}) {
    const PNorm p(pv);
    const RngState shared = cur.take(static_cast<std::uint64_t>(workers));
    WidthQuery cone_q{p, PNorm::infinity(), n, {0, 3}, MeasureSpec::cone(p, n)};
    WidthQuery surf_q{p, PNorm::infinity(), n, {0, 3}, MeasureSpec::surface(p, n)};
    const auto cone = estimate_widths(cone_q, samples, shared, workers);
    const auto surf = estimate_widths(surf_q, samples, shared, workers);
    for (int m : {0, 3}) {
      const double diff = std::abs(cone.at(m).mean - surf.at(m).mean);
      Check chk;
      chk.name = "surface_coincide p=" + fmt(pv) + " m=" + std::to_string(m);
      chk.statistic = diff;
      chk.passed = diff <= 1e-12;
      chk.detail = "|cone - surface| = " + fmt(diff) + " (limit 1e-12)";
      out.push_back(std::move(chk));
    }
  }
  return out;
}

std::vector<Check> suite_thm17(std::int64_t samples, RngState seed, int workers) {
  std::vector<Check> out;
  StreamCursor cur{seed};
  for (double pv : {0.5, 1.0, 2.0}) {
    const PNorm p(pv);
    for (int n : {10, 100}) {
      const auto est = run_query(p, PNorm::infinity(), n, {0, 1, 2},
                                 MeasureSpec::tensor_sparse(p, n), samples, cur, workers);
      for (int m : {1, 2, 3}) {
        const double quad = analytic::theorem17_quadrature(p, n, m);
        const EstimateResult& mc = est.at(m - 1);
        const double z = (mc.mean - quad) / mc.std_error;
        Check chk = z_check("thm17 p=" + fmt(pv) + " n=" + std::to_string(n) +
                                " m=" + std::to_string(m),
                            z, 3.0);
        chk.detail += ", quad = " + fmt(quad) + ", mc = " + fmt(mc.mean);
        out.push_back(std::move(chk));
      }
    }
  }
  return out;
}

std::vector<Check> check_thm6_stability(std::int64_t samples_each, RngState seed, int workers) {
  std::vector<Check> out;
  StreamCursor cur{seed};
  for (double pv : {0.5, 1.0, 2.0}) {
    const PNorm p(pv);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int n : {10, 100, 1000}) {
      const auto est = run_query(p, PNorm::infinity(), n, {0}, MeasureSpec::cone(p, n),
                                 samples_each, cur, workers);
      const double shape = analytic::bound_envelope(analytic::EnvelopeKind::Thm6Upper, p,
                                                    PNorm::infinity(), n, 0);
      const double r = est.at(0).mean / shape;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    out.push_back(band_check("thm6_stability p=" + fmt(pv), hi / lo, 2.0));
  }
  return out;
}

std::vector<Check> check_final1_convergence() {
  std::vector<Check> out;
  const int n = 200;
  for (double pv : {0.5, 1.0, 2.0}) {
    const PNorm p(pv);
    std::vector<double> vals;
    for (int m = 1; m <= 9; ++m) vals.push_back(analytic::theorem17_quadrature(p, n, m));
    std::vector<double> ratios;
    for (int i = 0; i + 1 < static_cast<int>(vals.size()); ++i)
      ratios.push_back(vals[i] / vals[i + 1]);
    const double target = 1.0 / pv + 1.0;
    bool decreasing = true;
    for (std::size_t i = 0; i + 1 < ratios.size(); ++i)
      decreasing &= ratios[i] > ratios[i + 1];
    const double last = ratios.back();
    Check chk;
    chk.name = "final1_convergence p=" + fmt(pv);
    chk.statistic = std::abs(last / target - 1.0);
    chk.passed = decreasing && std::abs(last - target) <= 0.1 * target;
    chk.detail = "ratios approach " + fmt(target) + " from above: first = " + fmt(ratios.front()) +
                 ", last = " + fmt(last) + (decreasing ? " (monotone)" : " (NOT monotone)");
    out.push_back(std::move(chk));
  }
  return out;
}

std::vector<Check> suite_bounds(std::int64_t samples, RngState seed, int workers) {
  std::vector<Check> out;
  StreamCursor cur{seed};
  cur.next = 1000;  // leave room for the thm6 sweep below

  for (Check& c : check_thm6_stability(samples, seed, workers)) out.push_back(std::move(c));

  // Surface scaling band (the n^(-1/p) two-sided estimate).
  for (double pv : {0.5, 2.0}) {
    const PNorm p(pv);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int n : {5, 20, 80}) {
      const auto est = run_query(p, PNorm::infinity(), n, {0}, MeasureSpec::surface(p, n),
                                 samples, cur, workers);
      const double r = est.at(0).mean * std::pow(static_cast<double>(n), 1.0 / pv);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    out.push_back(band_check("lemma8_surface_band p=" + fmt(pv), hi / lo, 2.0));
  }

  // Prop 12 shape stability for a finite q.
  {
    const PNorm p(1.0), q(2.0);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int n : {10, 100, 1000}) {
      const auto est = run_query(p, q, n, {0}, MeasureSpec::cone(p, n), samples, cur, workers);
      const double shape = analytic::bound_envelope(analytic::EnvelopeKind::Prop12, p, q, n, 0);
      const double r = est.at(0).mean / shape;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    out.push_back(band_check("prop12_stability p=1 q=2", hi / lo, 2.0));
  }

  for (Check& c : check_final1_convergence()) out.push_back(std::move(c));

  // Quadrature between the shape envelopes after a one-point calibration.
  // The calibrated sandwich needs slack: the quadrature/shape ratios drift
  // slowly in (n, m), so a factor-3 margin is applied on each side.
  for (double pv : {0.5, 1.0, 2.0}) {
    const PNorm p(pv);
    const double va = analytic::theorem17_quadrature(p, 50, 2);
    const auto ba = analytic::theorem17_bounds(p, 50, 2);
    const double c1 = va / ba.lower, c2 = va / ba.upper;
    bool ok = true;
    double worst = 1.0;
    for (int n : {10, 50, 200}) {
      for (int m : {1, 2, 3, 5}) {
        const double v = analytic::theorem17_quadrature(p, n, m);
        const auto b = analytic::theorem17_bounds(p, n, m);
        const double lo_ratio = v / (c1 * b.lower);   // >= 1/3 required
        const double hi_ratio = v / (c2 * b.upper);   // <= 3 required
        worst = std::max({worst, 1.0 / lo_ratio, hi_ratio});
        ok = ok && lo_ratio >= 1.0 / 3.0 && hi_ratio <= 3.0;
      }
    }
    Check chk;
    chk.name = "thm17_envelope p=" + fmt(pv);
    chk.statistic = worst;
    chk.passed = ok;
    chk.detail = "anchored sandwich within slack 3, worst factor = " + fmt(worst);
    out.push_back(std::move(chk));
  }

  // Estimates never exceed the deterministic width bound.
  {
    struct Cfg { double p; bool q_inf; double q; };
    for (const Cfg& c : {Cfg{0.5, false, 1.0}, Cfg{1.0, false, 2.0}, Cfg{2.0, true, 0.0}}) {
      const PNorm p(c.p);
      const PNorm q = c.q_inf ? PNorm::infinity() : PNorm(c.q);
      const int n = 30;
      const auto est = run_query(p, q, n, {0, 3}, MeasureSpec::cone(p, n),
                                 std::min<std::int64_t>(samples, 100000), cur, workers);
      bool ok = true;
      double worst = 0.0;
      for (int m : {0, 3}) {
        const double cap = analytic::bound_envelope(analytic::EnvelopeKind::Eq1, p, q, n, m);
        const double v = est.at(m).mean - 4.0 * est.at(m).std_error;
        worst = std::max(worst, v / cap);
        ok = ok && v <= cap;
      }
      Check chk;
      chk.name = "width_bound_containment p=" + fmt(c.p) + " q=" + (c.q_inf ? "inf" : fmt(c.q));
      chk.statistic = worst;
      chk.passed = ok;
      chk.detail = "max (mean - 4se)/bound = " + fmt(worst) + " (limit 1)";
      out.push_back(std::move(chk));
    }
  }
  return out;
}

std::vector<Check> suite_specfun() {
  using namespace specfun;
  std::vector<Check> out;

  // Inverse round trip over the dimension grid.  Grid points whose true
  // inverse lies below the double range (omega ~ y^n for large n) raise a
  // range error and are skipped; the count is reported.
  {
    double worst = 0.0;
    int skipped = 0, tested = 0;
    for (int n : {1, 2, 5, 10, 100, 1000}) {
      const IncGammaProfile prof(n);
      std::vector<double> ys{0.0, 1.0 - 1e-6};
      for (int i = 1; i <= 49; ++i) ys.push_back(0.02 * i);
      for (double y : ys) {
        try {
          const double w = inv_y_to_omega(prof, y);
          const double back = reg_lower_inc_gamma(1.0 / n, w);
          worst = std::max(worst, std::abs(back - y));
          ++tested;
        } catch (const std::range_error&) {
          ++skipped;
        }
      }
    }
    Check chk;
    chk.name = "specfun_roundtrip";
    chk.statistic = worst;
    chk.passed = worst <= 1e-10;
    chk.detail = "max |P(1/n, omega(y)) - y| = " + fmt(worst) + " over " +
                 std::to_string(tested) + " points (" + std::to_string(skipped) +
                 " sub-double-range points skipped)";
    out.push_back(std::move(chk));
  }

  // Tail bound soundness against an independent quadrature oracle.
  {
    Rng rng({20260810, 3});
    bool ok = true;
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double alpha = -4.0 + 8.0 * rng.uniform01();
      const double delta = std::max(1.0, 2.0 * std::abs(alpha)) * (1.0 + 3.0 * rng.uniform01());
      const double bound = tail_bound({alpha, delta});
      const double truth = tail_integral_oracle(alpha, delta);
      worst = std::max(worst, truth - bound);
      ok = ok && truth <= bound * (1.0 + 1e-12) + 1e-12;
    }
    Check chk;
    chk.name = "lemma3_soundness";
    chk.statistic = worst;
    chk.passed = ok;
    chk.detail = "max (integral - bound) = " + fmt(worst) + " over 200 random cases";
    out.push_back(std::move(chk));
  }

  // (Gamma(1/n)/n)^n approaches e^-C monotonically.
  {
    const double lim = analytic::limit_constant_lemma17();
    double prev_gap = std::numeric_limits<double>::infinity();
    bool monotone = true;
    double a_last = 0.0;
    for (int n : {10, 100, 1000, 10000}) {
      const double a_n = std::exp(n * (log_gamma(1.0 / n) - std::log(static_cast<double>(n))));
      const double gap = std::abs(a_n - lim);
      monotone = monotone && gap < prev_gap;
      prev_gap = gap;
      a_last = a_n;
    }
    Check chk;
    chk.name = "lemma17_limit";
    chk.statistic = std::abs(a_last - lim);
    chk.passed = monotone && std::abs(a_last - lim) < 1e-3;
    chk.detail = "|a_10000 - e^-C| = " + fmt(std::abs(a_last - lim)) +
                 (monotone ? " (monotone approach)" : " (NOT monotone)");
    out.push_back(std::move(chk));
  }
  return out;
}

std::vector<Check> check_sampler_laws(std::int64_t samples, RngState seed) {
  using specfun::log_gamma;
  std::vector<Check> out;
  StreamCursor cur{seed};
  for (double pv : {0.5, 1.0, 2.0}) {
    for (double beta : {-0.5, 0.0, 1.0}) {
      const PNorm p(pv);
      Rng rng(cur.take(1));
      MomentAccumulator m1, m2;
      for (std::int64_t s = 0; s < samples; ++s) {
        const double x = sample_gen_gamma(p, beta, rng);
        m1.add(x);
        m2.add(x * x);
      }
      const double base = log_gamma((beta + 1.0) / pv);
      const double e1 = std::exp(log_gamma((beta + 2.0) / pv) - base);
      const double e2 = std::exp(log_gamma((beta + 3.0) / pv) - base);
      const double cnt = static_cast<double>(samples);
      const double se1 = std::sqrt(m1.m2() / ((cnt - 1.0) * cnt));
      const double se2 = std::sqrt(m2.m2() / ((cnt - 1.0) * cnt));
      out.push_back(z_check("gen_gamma_moment1 p=" + fmt(pv) + " beta=" + fmt(beta),
                            (m1.mean() - e1) / se1, 4.0));
      out.push_back(z_check("gen_gamma_moment2 p=" + fmt(pv) + " beta=" + fmt(beta),
                            (m2.mean() - e2) / se2, 4.0));
    }
  }
  {
    Rng rng(cur.take(1));
    MomentAccumulator acc;
    for (std::int64_t s = 0; s < samples; ++s) acc.add(sample_gamma(0.01, rng));
    const double cnt = static_cast<double>(samples);
    const double se = std::sqrt(acc.m2() / ((cnt - 1.0) * cnt));
    out.push_back(z_check("gamma_small_shape mean(shape=1/100)", (acc.mean() - 0.01) / se, 4.0));
  }
  return out;
}

std::vector<Check> suite_samplers(std::int64_t samples, RngState seed) {
  return check_sampler_laws(samples, seed);
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "prop10", "lemma1", "lemma15", "surface_coincide", "thm17", "bounds", "specfun",
      "samplers"};
  return names;
}

std::vector<Check> run_suite(const std::string& name, std::int64_t samples, RngState seed,
                             int workers) {
  if (name == "prop10") return suite_prop10(samples, seed, workers);
  if (name == "lemma1") return suite_lemma1(samples, seed, workers);
  if (name == "lemma15") return suite_lemma15(samples, seed, workers);
  if (name == "surface_coincide") return suite_surface_coincide(samples, seed, workers);
  if (name == "thm17") return suite_thm17(samples, seed, workers);
  if (name == "bounds") return suite_bounds(samples, seed, workers);
  if (name == "specfun") return suite_specfun();
  if (name == "samplers") return suite_samplers(samples, seed);
  throw std::invalid_argument("unknown validation suite: " + name);
}

}  // namespace lpwidths::validation
