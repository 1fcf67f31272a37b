#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "lpwidths/errors.hpp"
#include "lpwidths/estimators.hpp"
#include "lpwidths/samplers.hpp"

using namespace lpwidths;

namespace {

// Naive reference estimator: per-m best_m_term_error calls and two-pass
// moments.  Consumes the identical sample stream as the library kernel.
std::map<int, double> naive_means(const WidthQuery& query, std::int64_t samples, RngState seed,
                                  int workers) {
  std::map<int, std::vector<double>> fs;
  std::map<int, std::vector<double>> ws;
  const std::int64_t base = samples / workers;
  const std::int64_t rem = samples % workers;
  const bool weighted = query.measure.kind() == MeasureKind::Surface;
  for (int k = 0; k < workers; ++k) {
    Rng rng({seed.seed, seed.stream_id + static_cast<std::uint64_t>(k)});
    const std::int64_t nk = base + (k < rem ? 1 : 0);
    for (std::int64_t s = 0; s < nk; ++s) {
      const WeightedSample smp = sample(query.measure, rng);
      for (int m : query.m_values) {
        fs[m].push_back(best_m_term_error(smp.point, m, query.q));
        if (weighted) ws[m].push_back(smp.weight);
      }
    }
  }
  std::map<int, double> out;
  for (int m : query.m_values) {
    long double num = 0.0L, den = 0.0L;
    for (std::size_t i = 0; i < fs[m].size(); ++i) {
      const long double w = weighted ? ws[m][i] : 1.0L;
      num += w * fs[m][i];
      den += w;
    }
    out[m] = static_cast<double>(num / den);
  }
  return out;
}

}  // namespace

TEST_SUITE("estimators") {

TEST_CASE("accumulator merge is an identity on empties and chunk-invariant") {
  MomentAccumulator empty, a;
  Rng rng({21, 0});
  for (int i = 0; i < 100; ++i) a.add(rng.uniform01());
  const MomentAccumulator m1 = merge(empty, a);
  CHECK(m1.count() == a.count());
  CHECK(m1.mean() == a.mean());
  CHECK(m1.m2() == a.m2());
  CHECK(empty.count() == 0);
  CHECK(empty.mean() == 0.0);
  CHECK(empty.m2() == 0.0);

  // A 10^4 stream split into 7 chunks equals single-pass accumulation.
  std::vector<double> stream(10000);
  Rng rng2({21, 1});
  for (double& v : stream) v = std::exp(3.0 * rng2.normal());
  MomentAccumulator single;
  for (double v : stream) single.add(v);
  MomentAccumulator chunks[7];
  for (std::size_t i = 0; i < stream.size(); ++i) chunks[i % 7].add(stream[i]);
  MomentAccumulator combined;
  for (const auto& c : chunks) combined.merge(c);
  CHECK(combined.count() == single.count());
  CHECK(combined.mean() == doctest::Approx(single.mean()).epsilon(1e-12));
  CHECK(combined.m2() == doctest::Approx(single.m2()).epsilon(1e-12));

  // Order-insensitive.
  MomentAccumulator ab = merge(chunks[0], chunks[1]);
  MomentAccumulator ba = merge(chunks[1], chunks[0]);
  CHECK(ab.mean() == doctest::Approx(ba.mean()).epsilon(1e-12));
  CHECK(ab.m2() == doctest::Approx(ba.m2()).epsilon(1e-12));
}

TEST_CASE("inverse normal cdf") {
  CHECK(detail::inverse_normal_cdf(0.975) == doctest::Approx(1.9599639845400545).epsilon(1e-12));
  CHECK(detail::inverse_normal_cdf(0.995) == doctest::Approx(2.5758293035489004).epsilon(1e-12));
  CHECK(detail::inverse_normal_cdf(0.5) == doctest::Approx(0.0));
  CHECK_THROWS_AS(detail::inverse_normal_cdf(0.0), std::domain_error);
}

TEST_CASE("p=q on a sphere measure gives exactly 1 at m=0") {
  const PNorm p(1.5);
  WidthQuery query{p, p, 12, {0}, MeasureSpec::cone(p, 12)};
  const auto res = estimate_widths(query, 20000, {31, 0}, 2);
  CHECK(std::abs(res.at(0).mean - 1.0) <= 1e-12);
  CHECK(res.at(0).std_error <= 1e-12);
  CHECK(res.at(0).ci_low <= res.at(0).mean);
  CHECK(res.at(0).mean <= res.at(0).ci_high);
}

TEST_CASE("n=2 cone estimate of the smaller coordinate") {
  const PNorm p(2.0);
  WidthQuery query{p, PNorm::infinity(), 2, {1}, MeasureSpec::cone(p, 2)};
  const auto res = estimate_widths(query, 1'000'000, {32, 0}, 2);
  // E min(x1, x2) on the quarter circle = (4/pi)(1 - sqrt(2)/2).
  const double target = 0.37292322857805662;
  CHECK(std::abs(res.at(1).mean - target) < 4.0 * res.at(1).std_error);
}

TEST_CASE("smallest coordinate stays below n^(-1/p) in mean") {
  const PNorm p(1.0);
  const int n = 9;
  WidthQuery query{p, PNorm::infinity(), n, {n - 1}, MeasureSpec::cone(p, n)};
  const auto res = estimate_widths(query, 100000, {33, 0}, 2);
  CHECK(res.at(n - 1).mean >= 0.0);
  CHECK(res.at(n - 1).mean <= std::pow(static_cast<double>(n), -1.0) + 4 * res.at(n - 1).std_error);
}

TEST_CASE("serial and parallel kernels agree bit-for-bit") {
  const PNorm p(0.5);
  WidthQuery query{p, PNorm(1.0), 20, {0, 3, 7}, MeasureSpec::cone(p, 20)};
  const auto par = estimate_widths(query, 40000, {34, 5}, 4);
  const auto ser = estimate_widths_serial(query, 40000, {34, 5}, 4);
  for (const auto& [m, est] : par) {
    CHECK(est.mean == ser.at(m).mean);
    CHECK(est.std_error == ser.at(m).std_error);
    CHECK(est.samples == ser.at(m).samples);
  }
}

TEST_CASE("kernel agrees with the naive reference estimator") {
  for (int variant = 0; variant < 3; ++variant) {
    const PNorm p(variant == 0 ? 0.5 : 1.0);
    const PNorm q = variant == 2 ? PNorm::infinity() : PNorm(variant == 0 ? 0.8 : 2.0);
    const MeasureSpec measure = variant == 2 ? MeasureSpec::surface(p, 10)
                                             : MeasureSpec::cone(p, 10);
    WidthQuery query{p, q, 10, {0, 2, 5}, measure};
    const RngState seed{35, static_cast<std::uint64_t>(variant)};
    const auto fast = estimate_widths(query, 20000, seed, 3);
    const auto slow = naive_means(query, 20000, seed, 3);
    for (const auto& [m, est] : fast)
      CHECK(est.mean == doctest::Approx(slow.at(m)).epsilon(1e-12));
  }
}

TEST_CASE("per-m means are nonincreasing on a common stream") {
  const PNorm p(0.5);
  for (const PNorm& q : {PNorm(0.7), PNorm(2.0), PNorm::infinity()}) {
    std::vector<int> ms;
    for (int m = 0; m < 15; ++m) ms.push_back(m);
    WidthQuery query{p, q, 15, ms, MeasureSpec::cone(p, 15)};
    const auto res = estimate_widths(query, 20000, {36, 0}, 2);
    double prev = std::numeric_limits<double>::infinity();
    for (int m = 0; m < 15; ++m) {
      CHECK(res.at(m).mean <= prev);
      prev = res.at(m).mean;
    }
  }
}

TEST_CASE("std_error scales like 1/sqrt(samples)") {
  const PNorm p(1.0);
  WidthQuery query{p, PNorm::infinity(), 10, {0}, MeasureSpec::cone(p, 10)};
  std::vector<double> log_n, log_se;
  std::uint64_t stream = 0;
  for (std::int64_t s : {1000, 10000, 100000, 1000000}) {
    const auto res = estimate_widths(query, s, {37, stream}, 2);
    stream += 2;
    log_n.push_back(std::log10(static_cast<double>(s)));
    log_se.push_back(std::log10(res.at(0).std_error));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(log_n.size());
  for (std::size_t i = 0; i < log_n.size(); ++i) {
    sx += log_n[i]; sy += log_se[i]; sxx += log_n[i] * log_n[i]; sxy += log_n[i] * log_se[i];
  }
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  CHECK(slope == doctest::Approx(-0.5).epsilon(0.1));
}

TEST_CASE("surface self-normalized estimates coincide with cone at p in {1,2}") {
  for (double pv : {1.0, 2.0}) {
    const PNorm p(pv);
    WidthQuery cone_q{p, PNorm::infinity(), 12, {0, 4}, MeasureSpec::cone(p, 12)};
    WidthQuery surf_q{p, PNorm::infinity(), 12, {0, 4}, MeasureSpec::surface(p, 12)};
    const auto c = estimate_widths(cone_q, 50000, {38, 0}, 2);
    const auto s = estimate_widths(surf_q, 50000, {38, 0}, 2);
    for (int m : {0, 4}) {
      CHECK(s.at(m).mode == EstimatorMode::SelfNormalized);
      CHECK(std::abs(c.at(m).mean - s.at(m).mean) <= 1e-12);
    }
  }
}

TEST_CASE("estimates respect the deterministic width bound") {
  Rng cfg_rng({39, 0});
  for (int trial = 0; trial < 5; ++trial) {
    const double pv = 0.4 + 1.6 * cfg_rng.uniform01();
    const double qv = pv + 2.0 * cfg_rng.uniform01();
    const PNorm p(pv), q(qv);
    const int n = 12;
    const int m = static_cast<int>(cfg_rng.uniform01() * 6);
    WidthQuery query{p, q, n, {m}, MeasureSpec::cone(p, n)};
    const auto res = estimate_widths(query, 20000, {40, static_cast<std::uint64_t>(trial)}, 2);
    const double cap = std::pow(m + 1.0, 1.0 / qv - 1.0 / pv);
    CHECK(res.at(m).mean - 4.0 * res.at(m).std_error <= cap);
  }
}

TEST_CASE("ratio_check_prop10") {
  // n=2, p=q=2, m=0: cone mean is exactly 1, volume mean E U^(1/2) = 2/3.
  const RatioCheck rc = ratio_check_prop10(PNorm(2.0), PNorm(2.0), 2, 0, 200000, {41, 0}, 2);
  CHECK(rc.ratio == doctest::Approx(2.0 / 3.0).epsilon(0.01));
  CHECK(std::abs(rc.z_score) < 4.0);

  const RatioCheck rc2 = ratio_check_prop10(PNorm(1.0), PNorm::infinity(), 10, 0, 200000, {42, 0}, 2);
  CHECK(rc2.ratio == doctest::Approx(10.0 / 11.0).epsilon(0.02));
  CHECK(std::abs(rc2.z_score) < 4.0);

  const RatioCheck rc3 =
      ratio_check_prop10(PNorm(0.5), PNorm::infinity(), 100, 5, 100000, {43, 0}, 2);
  CHECK(std::abs(rc3.z_score) < 4.0);
}

TEST_CASE("query validation errors") {
  const PNorm p(2.0);
  WidthQuery bad_m{p, PNorm::infinity(), 4, {4}, MeasureSpec::cone(p, 4)};
  CHECK_THROWS_AS(estimate_widths(bad_m, 100, {0, 0}, 1), std::domain_error);
  WidthQuery bad_pq{p, PNorm(1.0), 4, {0}, MeasureSpec::cone(p, 4)};
  CHECK_THROWS_AS(estimate_widths(bad_pq, 100, {0, 0}, 1), std::domain_error);
  WidthQuery ok{p, PNorm::infinity(), 4, {0}, MeasureSpec::cone(p, 4)};
  CHECK_THROWS_AS(estimate_widths(ok, 0, {0, 0}, 1), std::domain_error);
  CHECK_THROWS_AS(estimate_widths(ok, 100, {0, 0}, 0), std::domain_error);
  CHECK_THROWS_AS(estimate_widths(ok, 100, {0, 0}, 1, 1.5), std::domain_error);
}

TEST_CASE("single-sample estimates carry infinite std_error") {
  const PNorm p(1.0);
  WidthQuery query{p, PNorm::infinity(), 4, {0}, MeasureSpec::cone(p, 4)};
  const auto res = estimate_widths(query, 1, {44, 0}, 1);
  CHECK(res.at(0).samples == 1);
  CHECK(std::isinf(res.at(0).std_error));
  CHECK(res.at(0).ci_low <= res.at(0).mean);
}

}  // TEST_SUITE
