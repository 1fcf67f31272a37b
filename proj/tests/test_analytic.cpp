#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lpwidths/analytic.hpp"
#include "lpwidths/specfun.hpp"
#include "lpwidths/validation.hpp"

using namespace lpwidths;
using namespace lpwidths::analytic;

TEST_SUITE("analytic") {

TEST_CASE("bridge_lemma1 closed forms") {
  // p=1: Gamma(n)/Gamma(n+1) = 1/n.
  CHECK(bridge_lemma1(PNorm(1.0), 10).value == doctest::Approx(0.1).epsilon(1e-13));
  // p=2, n=2: Gamma(1)/Gamma(1.5) = 1/(sqrt(pi)/2).
  CHECK(bridge_lemma1(PNorm(2.0), 2).value ==
        doctest::Approx(1.1283791670955126).epsilon(1e-13));
  CHECK_THROWS_AS(bridge_lemma1(PNorm::infinity(), 4), std::domain_error);
}

TEST_CASE("bridge factor times n^(1/p) stays in a narrow band") {
  for (double pv : {0.5, 1.0, 2.0}) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int n : {2, 5, 10, 100, 1000, 10000}) {
      const double r = bridge_lemma1(PNorm(pv), n).value * std::pow(n, 1.0 / pv);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    CHECK(hi / lo < 2.0);
    // Stirling limit p^(1/p).
    const double limit = std::pow(pv, 1.0 / pv);
    CHECK(bridge_lemma1(PNorm(pv), 10000).value * std::pow(10000.0, 1.0 / pv) ==
          doctest::Approx(limit).epsilon(1e-3));
  }
}

TEST_CASE("theorem17_quadrature against frozen high-precision references") {
  struct Ref { double p; int n, m; double v; };
  // 30-digit independent inversion + quadrature, frozen.
  const Ref refs[] = {
      {1.0, 2, 1, 0.81830988618379067},
      {1.0, 2, 2, 0.18169011381620933},
      {2.0, 2, 1, 0.90031631615710607},  // = 2 sqrt(2)/pi exactly
      {0.5, 2, 1, 0.69330988618379067},
      {1.0, 10, 1, 0.66454353060820057},
      {1.0, 10, 2, 0.21144893628151325},
      {1.0, 10, 3, 0.07905488163025727},
      {2.0, 10, 1, 0.80669136825361188},
      {0.5, 10, 1, 0.4767894249301887},
      {1.0, 100, 1, 0.628391912832667},
      {1.0, 100, 2, 0.20990686260259337},
  };
  for (const Ref& r : refs)
    CHECK(theorem17_quadrature(PNorm(r.p), r.n, r.m) ==
          doctest::Approx(r.v).epsilon(1e-7));
}

TEST_CASE("theorem17_quadrature p=1 values sum to one over all m") {
  // On the l_1 simplex the coordinates sum to 1, so the order-statistic
  // means must as well; exercises every m including m = n.
  const int n = 6;
  double total = 0.0;
  for (int m = 1; m <= n; ++m) total += theorem17_quadrature(PNorm(1.0), n, m);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("theorem17_quadrature domain errors") {
  CHECK_THROWS_AS(theorem17_quadrature(PNorm(1.0), 1, 1), std::domain_error);
  CHECK_THROWS_AS(theorem17_quadrature(PNorm(1.0), 10, 0), std::domain_error);
  CHECK_THROWS_AS(theorem17_quadrature(PNorm(1.0), 10, 11), std::domain_error);
  CHECK_THROWS_AS(theorem17_quadrature(PNorm::infinity(), 10, 1), std::domain_error);
}

TEST_CASE("theorem17_bounds gamma-ratio anchors") {
  // p=1, n=100, m=1: lower = 100 * Gamma(200)/Gamma(201) = 1/2.
  const auto b = theorem17_bounds(PNorm(1.0), 100, 1);
  CHECK(b.lower == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(b.upper > b.lower);
  // extra term: Gamma(101)/Gamma(100) * (e^-1/Gamma(1/100))^1 / 1!
  const double extra = 100.0 * std::exp(-1.0) / std::exp(specfun::log_gamma(0.01));
  CHECK(b.upper - b.lower == doctest::Approx(extra).epsilon(1e-12));
  CHECK_THROWS_AS(theorem17_bounds(PNorm(1.0), 10, 0), std::domain_error);
}

TEST_CASE("theorem17_bounds upper/lower ratio bounded in n for fixed m") {
  for (double pv : {0.5, 2.0}) {
    for (int m : {1, 3}) {
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (int n : {10, 100, 1000, 10000}) {
        const auto b = theorem17_bounds(PNorm(pv), n, m);
        const double r = b.upper / b.lower;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
      CHECK(hi / lo < 3.0);
      CHECK(std::isfinite(hi));
    }
  }
}

TEST_CASE("bound_envelope shapes") {
  // Thm 6 at p=1, n=100, m=0: log(100e)/100.
  CHECK(bound_envelope(EnvelopeKind::Thm6Upper, PNorm(1.0), PNorm::infinity(), 100, 0) ==
        doctest::Approx(std::log(100.0 * M_E) / 100.0).epsilon(1e-13));
  // Thm 9 at p=2, n=100: sqrt(log(101)/100).
  CHECK(bound_envelope(EnvelopeKind::Thm9Upper, PNorm(2.0), PNorm::infinity(), 100, 0) ==
        doctest::Approx(std::sqrt(std::log(101.0) / 100.0)).epsilon(1e-13));
  // Prop 12 with p=q: n^0 = 1.
  CHECK(bound_envelope(EnvelopeKind::Prop12, PNorm(2.0), PNorm(2.0), 50, 0) == 1.0);
  // Eq. (1) shape.
  CHECK(bound_envelope(EnvelopeKind::Eq1, PNorm(0.5), PNorm::infinity(), 10, 3) ==
        doctest::Approx(std::pow(4.0, -2.0)).epsilon(1e-13));
  CHECK_THROWS_AS(bound_envelope(EnvelopeKind::Thm6Upper, PNorm(1.0), PNorm::infinity(), 100, 100),
                  std::domain_error);
  CHECK_THROWS_AS(bound_envelope(EnvelopeKind::Thm9Upper, PNorm(1.0), PNorm::infinity(), 100, 1),
                  std::domain_error);
  CHECK_THROWS_AS(bound_envelope(EnvelopeKind::Prop12, PNorm(1.0), PNorm::infinity(), 100, 0),
                  std::domain_error);
}

TEST_CASE("limit_constant_lemma17") {
  const double c = limit_constant_lemma17();
  CHECK(c == doctest::Approx(0.5614594835668852).epsilon(1e-12));
  // Approach from the gamma sequence.
  const double a1000 =
      std::exp(1000.0 * (specfun::log_gamma(1e-3) - std::log(1000.0)));
  CHECK(std::abs(a1000 - c) < 5e-4);
}

TEST_CASE("final1 ratios converge to 1/p + 1 from above") {
  // The asymptotic geometric ratio is approached monotonically; small m sit
  // visibly above it (the competing e^-m/m! term in the upper envelope).
  for (double pv : {1.0, 2.0}) {
    std::vector<double> vals;
    for (int m = 1; m <= 9; ++m) vals.push_back(theorem17_quadrature(PNorm(pv), 200, m));
    const double target = 1.0 / pv + 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
      const double r = vals[i] / vals[i + 1];
      CHECK(r > target * 0.98);
      CHECK(r < prev);
      prev = r;
    }
    CHECK(prev == doctest::Approx(target).epsilon(0.1));
  }
}

TEST_CASE("lemma15 product-moment identity against MC") {
  const auto checks = validation::suite_lemma15(200000, {50, 0}, 1);
  for (const auto& c : checks) {
    INFO(c.name, ": ", c.detail);
    CHECK(c.passed);
  }
}

}  // TEST_SUITE
