#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lpwidths/rng.hpp"
#include "lpwidths/sparse_approx.hpp"
#include "oracles.hpp"

using namespace lpwidths;

namespace {

std::vector<double> random_vector(Rng& rng, int n, double scale = 1.0) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (double& v : x) v = scale * rng.uniform01();
  return x;
}

}  // namespace

TEST_SUITE("sparse_approx") {

TEST_CASE("PNorm validation") {
  CHECK(PNorm(0.5).value() == 0.5);
  CHECK(PNorm::infinity().is_infinite());
  CHECK(PNorm::infinity().reciprocal() == 0.0);
  CHECK(PNorm(4.0).reciprocal() == 0.25);
  CHECK_THROWS_AS(PNorm(0.0), std::domain_error);
  CHECK_THROWS_AS(PNorm(-1.0), std::domain_error);
  CHECK_THROWS_AS(PNorm(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
}

TEST_CASE("PositiveVector and SimplexPoint invariants") {
  CHECK_THROWS_AS(PositiveVector({}), std::domain_error);
  CHECK_THROWS_AS(PositiveVector({1.0, -0.1}), std::domain_error);
  CHECK_THROWS_AS(PositiveVector({std::numeric_limits<double>::infinity()}), std::domain_error);
  CHECK_NOTHROW(SimplexPoint(PositiveVector({0.6, 0.8}), PNorm(2.0)));
  CHECK_THROWS_AS(SimplexPoint(PositiveVector({0.6, 0.9}), PNorm(2.0)), std::domain_error);
  CHECK_NOTHROW(SimplexPoint(PositiveVector({1.0, 0.3}), PNorm::infinity()));
}

TEST_CASE("quasi_norm basic values") {
  const std::vector<double> pyth{3.0, 4.0};
  CHECK(quasi_norm(pyth, PNorm(2.0)) == doctest::Approx(5.0).epsilon(1e-15));
  const std::vector<double> ones{1.0, 1.0, 1.0, 1.0};
  CHECK(quasi_norm(ones, PNorm(0.5)) == doctest::Approx(16.0).epsilon(1e-15));
  const std::vector<double> v{0.3, 0.7, 0.1};
  CHECK(quasi_norm(v, PNorm::infinity()) == 0.7);
  const std::vector<double> zeros{0.0, 0.0};
  CHECK(quasi_norm(zeros, PNorm(0.5)) == 0.0);
  CHECK(quasi_norm(zeros, PNorm::infinity()) == 0.0);
}

TEST_CASE("rearrange sorts non-increasingly and preserves the multiset") {
  CHECK(rearrange(std::vector<double>{3, 1, 2}) == std::vector<double>{3, 2, 1});
  CHECK(rearrange(std::vector<double>{0, 0, 0}) == std::vector<double>{0, 0, 0});
  CHECK(rearrange(std::vector<double>{1, 1, 2}) == std::vector<double>{2, 1, 1});
}

TEST_CASE("best_m_term_error examples and edge cases") {
  const std::vector<double> x{3.0, 1.0, 2.0};
  CHECK(best_m_term_error(x, 1, PNorm::infinity()) == 2.0);
  CHECK(best_m_term_error(x, 1, PNorm(2.0)) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
  CHECK(best_m_term_error(x, 3, PNorm(2.0)) == 0.0);
  CHECK(best_m_term_error(x, 3, PNorm::infinity()) == 0.0);
  CHECK(best_m_term_error(x, 0, PNorm(1.0)) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK_THROWS_AS(best_m_term_error(x, 4, PNorm(1.0)), std::domain_error);
  CHECK_THROWS_AS(best_m_term_error(x, -1, PNorm(1.0)), std::domain_error);
}

TEST_CASE("best_m_term_error equals exhaustive support minimization") {
  Rng rng({123, 0});
  const PNorm qs[] = {PNorm(0.5), PNorm(1.0), PNorm(2.0), PNorm::infinity()};
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform01() * 7);  // n <= 8
    const auto x = random_vector(rng, n, 3.0);
    for (const PNorm& q : qs) {
      for (int m = 0; m <= n; ++m) {
        const double fast = best_m_term_error(x, m, q);
        const double brute = oracles::brute_force_best_m_term(x, m, q);
        CHECK(std::abs(fast - brute) <= 1e-12 * std::max(1.0, brute));
      }
    }
  }
}

TEST_CASE("best_m_term_error monotone in m and scale equivariant") {
  Rng rng({5, 5});
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform01() * 30);
    const auto x = random_vector(rng, n);
    const PNorm q = trial % 2 ? PNorm(0.7) : PNorm(3.0);
    double prev = std::numeric_limits<double>::infinity();
    for (int m = 0; m <= n; ++m) {
      const double e = best_m_term_error(x, m, q);
      CHECK(e <= prev + 1e-15);
      prev = e;
    }
    const double c = 2.5 * rng.uniform01();
    std::vector<double> cx = x;
    for (double& v : cx) v *= c;
    const int m = static_cast<int>(rng.uniform01() * n);
    CHECK(best_m_term_error(cx, m, q) ==
          doctest::Approx(c * best_m_term_error(x, m, q)).epsilon(1e-12));
  }
}

TEST_CASE("interpolation inequality") {
  Rng rng({77, 0});
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform01() * 20);
    const auto x = random_vector(rng, n);
    double pv = 0.2 + 2.0 * rng.uniform01();
    double qv = pv + 0.1 + 3.0 * rng.uniform01();
    const double theta = pv / qv;
    const double lhs = quasi_norm(x, PNorm(qv));
    const double rhs = std::pow(quasi_norm(x, PNorm(pv)), theta) *
                       std::pow(quasi_norm(x, PNorm::infinity()), 1.0 - theta);
    CHECK(lhs <= rhs * (1.0 + 1e-12));
  }
}

TEST_CASE("width_bounds") {
  const auto [lo0, up0] = width_bounds(PNorm(1.0), PNorm::infinity(), 0);
  CHECK(lo0 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(up0 == doctest::Approx(1.0).epsilon(1e-15));
  const auto [lo1, up1] = width_bounds(PNorm(3.0), PNorm(3.0), 17);
  CHECK(lo1 == doctest::Approx(std::exp2(-1.0 / 3.0)).epsilon(1e-15));
  CHECK(up1 == 1.0);
  const auto [lo2, up2] = width_bounds(PNorm(0.5), PNorm::infinity(), 3);
  CHECK(up2 == doctest::Approx(0.0625).epsilon(1e-14));
  CHECK(lo2 == doctest::Approx(0.015625).epsilon(1e-14));
  CHECK_THROWS_AS(width_bounds(PNorm(2.0), PNorm(1.0), 0), std::domain_error);
  CHECK_THROWS_AS(width_bounds(PNorm(1.0), PNorm(2.0), -1), std::domain_error);
}

TEST_CASE("extremal_witness shape and sharpness") {
  const PositiveVector w1 = extremal_witness(PNorm(1.0), 1, 3);
  CHECK(w1.entries() == std::vector<double>{0.5, 0.5, 0.0});
  const PositiveVector w2 = extremal_witness(PNorm(0.5), 0, 2);
  CHECK(w2.entries() == std::vector<double>{1.0, 0.0});
  const PositiveVector w3 = extremal_witness(PNorm(2.0), 3, 8);
  CHECK(w3.entries()[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(best_m_term_error(w3, 3, PNorm::infinity()) == doctest::Approx(0.5).epsilon(1e-15));
  // sigma_m(x)_inf * (m+1)^(1/p) = 1 exactly for the witness.
  Rng rng({11, 3});
  for (int trial = 0; trial < 100; ++trial) {
    const double pv = 0.3 + 3.0 * rng.uniform01();
    const int n = 2 + static_cast<int>(rng.uniform01() * 10);
    const int m = static_cast<int>(rng.uniform01() * n);
    const PositiveVector w = extremal_witness(PNorm(pv), m, n);
    const double prod = best_m_term_error(w, m, PNorm::infinity()) *
                        std::pow(m + 1.0, 1.0 / pv);
    CHECK(prod == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(quasi_norm(w, PNorm(pv)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(extremal_witness(PNorm(1.0), 3, 3), std::domain_error);
  CHECK_THROWS_AS(extremal_witness(PNorm::infinity(), 0, 3), std::domain_error);
}

}  // TEST_SUITE
