#include "lpwidths/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "lpwidths/errors.hpp"

namespace lpwidths {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::domain_error(msg);
}

void neumaier_add(double& sum, double& comp, double v) {
  const double t = sum + v;
  comp += (std::abs(sum) >= std::abs(v)) ? (sum - t) + v : (v - t) + sum;
  sum = t;
}

}  // namespace

void WidthQuery::validate() {
  require(p <= q, "WidthQuery: requires p <= q");
  require(n >= 2, "WidthQuery: requires n >= 2");
  require(n == measure.n(), "WidthQuery: n inconsistent with measure");
  require(p == measure.p(), "WidthQuery: p inconsistent with measure");
  require(!m_values.empty(), "WidthQuery: m_values must be nonempty");
  for (int m : m_values)
    require(m >= 0 && m <= n - 1, "WidthQuery: every m must lie in [0, n-1]");
  std::sort(m_values.begin(), m_values.end());
  m_values.erase(std::unique(m_values.begin(), m_values.end()), m_values.end());
}

void MomentAccumulator::add_weighted(double f, double w) {
  ++count_;
  const double delta = f - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (f - mean_);
  neumaier_add(w_sum_, w_comp_, w);
  neumaier_add(wf_sum_, wf_comp_, w * f);
  w2_sum_ += w * w;
  w2f_sum_ += w * w * f;
  w2f2_sum_ += w * w * f * f;
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double delta = other.mean_ - mean_;
  const double total = na + nb;
  mean_ += delta * nb / total;
  m2_ += other.m2_ + delta * delta * na * nb / total;
  count_ += other.count_;
  neumaier_add(w_sum_, w_comp_, other.w_sum_);
  neumaier_add(w_sum_, w_comp_, other.w_comp_);
  neumaier_add(wf_sum_, wf_comp_, other.wf_sum_);
  neumaier_add(wf_sum_, wf_comp_, other.wf_comp_);
  w2_sum_ += other.w2_sum_;
  w2f_sum_ += other.w2f_sum_;
  w2f2_sum_ += other.w2f2_sum_;
}

MomentAccumulator merge(const MomentAccumulator& a, const MomentAccumulator& b) {
  MomentAccumulator out = a;
  out.merge(b);
  return out;
}

namespace detail {

double inverse_normal_cdf(double q) {
  if (!(q > 0.0 && q < 1.0))
    throw std::domain_error("inverse_normal_cdf: argument must lie in (0, 1)");
  // Acklam's rational approximation.
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (q < plow) {
    const double r = std::sqrt(-2.0 * std::log(q));
    x = (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  } else if (q <= 1.0 - plow) {
    const double r = q - 0.5;
    const double s = r * r;
    x = (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) * r /
        (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0);
  } else {
    const double r = std::sqrt(-2.0 * std::log(1.0 - q));
    x = -(((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  }
  // One Halley step against erfc brings the result to ~1e-15.
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - q;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

}  // namespace detail

namespace {

struct WorkerScratch {
  std::vector<double> point;
  std::vector<double> powers;
  std::vector<double> suffix;
};

// Accumulates one worker's share of the stream into per-m accumulators.
void accumulate_worker(const WidthQuery& query, std::int64_t nsamples, RngState state,
                       std::vector<MomentAccumulator>& accs, std::uint64_t& redraws,
                       WorkerScratch& scratch) {
  const int n = query.n;
  const bool q_inf = query.q.is_infinite();
  const double qv = q_inf ? 0.0 : query.q.value();
  const bool weighted = query.measure.kind() == MeasureKind::Surface;
  scratch.point.resize(static_cast<std::size_t>(n));
  scratch.powers.resize(static_cast<std::size_t>(n));
  scratch.suffix.resize(static_cast<std::size_t>(n) + 1);
  Rng rng(state);
  for (std::int64_t s = 0; s < nsamples; ++s) {
    const double w = sample_into(query.measure, rng, scratch.point, &redraws);
    std::sort(scratch.point.begin(), scratch.point.end(), std::greater<>());
    if (!q_inf) {
      for (int j = 0; j < n; ++j) scratch.powers[j] = std::pow(scratch.point[j], qv);
      // Compensated suffix sums, clamped so the tail is monotone in m even
      // at the last ulp.
      double sum = 0.0, comp = 0.0;
      scratch.suffix[n] = 0.0;
      for (int j = n - 1; j >= 0; --j) {
        neumaier_add(sum, comp, scratch.powers[j]);
        scratch.suffix[j] = std::max(sum + comp, scratch.suffix[j + 1]);
      }
    }
    for (std::size_t i = 0; i < query.m_values.size(); ++i) {
      const int m = query.m_values[i];
      double f;
      if (q_inf) {
        f = scratch.point[m];
      } else {
        const double tail = scratch.suffix[m];
        f = tail > 0.0 ? std::pow(tail, 1.0 / qv) : 0.0;
      }
      if (weighted)
        accs[i].add_weighted(f, w);
      else
        accs[i].add(f);
    }
  }
}

EstimateResult finalize(const MomentAccumulator& acc, EstimatorMode mode, double ci_level) {
  EstimateResult r;
  r.samples = acc.count();
  r.mode = mode;
  const double z = detail::inverse_normal_cdf(0.5 * (1.0 + ci_level));
  if (mode == EstimatorMode::Plain) {
    r.mean = acc.mean();
    const double cnt = static_cast<double>(acc.count());
    r.std_error = acc.count() >= 2
                      ? std::sqrt(std::max(0.0, acc.m2()) / ((cnt - 1.0) * cnt))
                      : std::numeric_limits<double>::infinity();
  } else {
    const double wsum = acc.weight_sum();
    if (!(wsum > 0.0) || !std::isfinite(wsum))
      throw DegenerateEstimateError("estimate_widths: weight mass is zero or non-finite");
    const double ratio = acc.weighted_mean_num() / wsum;
    r.mean = ratio;
    // Delta-method variance of the ratio estimator:
    // sum w_i^2 (f_i - R)^2 / (sum w_i)^2.
    const double var_num =
        acc.w2f2_sum() - 2.0 * ratio * acc.w2f_sum() + ratio * ratio * acc.w2_sum();
    r.std_error = acc.count() >= 2 ? std::sqrt(std::max(0.0, var_num)) / wsum
                                   : std::numeric_limits<double>::infinity();
  }
  r.ci_low = r.mean - z * r.std_error;
  r.ci_high = r.mean + z * r.std_error;
  return r;
}

std::map<int, EstimateResult> estimate_widths_impl(WidthQuery query, std::int64_t samples,
                                                   RngState seed, int workers,
                                                   double ci_level,
                                                   EstimateDiagnostics* diag, bool parallel) {
  query.validate();
  require(samples >= 1, "estimate_widths: samples must be >= 1");
  require(workers >= 1, "estimate_widths: workers must be >= 1");
  require(ci_level > 0.0 && ci_level < 1.0, "estimate_widths: ci_level must lie in (0, 1)");

  const std::size_t n_m = query.m_values.size();
  const std::int64_t base = samples / workers;
  const std::int64_t rem = samples % workers;
  std::vector<std::vector<MomentAccumulator>> per_worker(
      static_cast<std::size_t>(workers), std::vector<MomentAccumulator>(n_m));
  std::vector<std::uint64_t> per_worker_redraws(static_cast<std::size_t>(workers), 0);

  if (parallel) {
#pragma omp parallel
    {
      WorkerScratch scratch;
#pragma omp for schedule(dynamic, 1)
      for (int k = 0; k < workers; ++k) {
        const std::int64_t nk = base + (k < rem ? 1 : 0);
        if (nk == 0) continue;
        accumulate_worker(query, nk, {seed.seed, seed.stream_id + static_cast<std::uint64_t>(k)},
                          per_worker[static_cast<std::size_t>(k)],
                          per_worker_redraws[static_cast<std::size_t>(k)], scratch);
      }
    }
  } else {
    WorkerScratch scratch;
    for (int k = 0; k < workers; ++k) {
      const std::int64_t nk = base + (k < rem ? 1 : 0);
      if (nk == 0) continue;
      accumulate_worker(query, nk, {seed.seed, seed.stream_id + static_cast<std::uint64_t>(k)},
                        per_worker[static_cast<std::size_t>(k)],
                        per_worker_redraws[static_cast<std::size_t>(k)], scratch);
    }
  }

  // Merge in worker order; this makes parallel and serial paths bit-identical.
  std::vector<MomentAccumulator> merged(n_m);
  std::uint64_t redraws = 0;
  for (int k = 0; k < workers; ++k) {
    for (std::size_t i = 0; i < n_m; ++i) merged[i].merge(per_worker[static_cast<std::size_t>(k)][i]);
    redraws += per_worker_redraws[static_cast<std::size_t>(k)];
  }
  if (diag) diag->surface_redraws = redraws;

  const EstimatorMode mode = query.measure.kind() == MeasureKind::Surface
                                 ? EstimatorMode::SelfNormalized
                                 : EstimatorMode::Plain;
  std::map<int, EstimateResult> out;
  for (std::size_t i = 0; i < n_m; ++i)
    out.emplace(query.m_values[i], finalize(merged[i], mode, ci_level));
  return out;
}

}  // namespace

std::map<int, EstimateResult> estimate_widths(WidthQuery query, std::int64_t samples,
                                              RngState seed, int workers, double ci_level,
                                              EstimateDiagnostics* diag) {
  return estimate_widths_impl(std::move(query), samples, seed, workers, ci_level, diag, true);
}

std::map<int, EstimateResult> estimate_widths_serial(WidthQuery query, std::int64_t samples,
                                                     RngState seed, int workers,
                                                     double ci_level,
                                                     EstimateDiagnostics* diag) {
  return estimate_widths_impl(std::move(query), samples, seed, workers, ci_level, diag, false);
}

RatioCheck ratio_check_prop10(PNorm p, PNorm q, int n, int m, std::int64_t samples,
                              RngState seed, int workers) {
  WidthQuery cone_query{p, q, n, {m}, MeasureSpec::cone(p, n)};
  WidthQuery vol_query{p, q, n, {m}, MeasureSpec::volume(p, n)};
  const auto cone = estimate_widths(std::move(cone_query), samples, seed, workers);
  const RngState vol_seed{seed.seed, seed.stream_id + static_cast<std::uint64_t>(workers)};
  const auto vol = estimate_widths(std::move(vol_query), samples, vol_seed, workers);

  const EstimateResult& c = cone.at(m);
  const EstimateResult& v = vol.at(m);
  if (!(c.mean > 4.0 * c.std_error))
    throw DegenerateRatioError("ratio_check_prop10: cone estimate indistinguishable from zero");
  RatioCheck out;
  out.ratio = v.mean / c.mean;
  const double rel_var = (v.std_error / v.mean) * (v.std_error / v.mean) +
                         (c.std_error / c.mean) * (c.std_error / c.mean);
  const double se_ratio = std::abs(out.ratio) * std::sqrt(rel_var);
  const double target = static_cast<double>(n) / (n + 1.0);
  out.z_score = (out.ratio - target) / se_ratio;
  return out;
}

}  // namespace lpwidths
