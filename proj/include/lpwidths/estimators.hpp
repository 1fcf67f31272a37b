#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "lpwidths/rng.hpp"
#include "lpwidths/samplers.hpp"
#include "lpwidths/sparse_approx.hpp"

namespace lpwidths {

/// One estimation request: all m values are evaluated on a common sample
/// stream so the decay profile in m is smooth.
struct WidthQuery {
  PNorm p;
  PNorm q;
  int n;
  std::vector<int> m_values;  // each in [0, n-1]
  MeasureSpec measure;

  // Checks field consistency and canonicalizes m_values (sorted, unique).
  void validate();
};

/// Mergeable streaming statistics for one estimand.  count/mean/m2 are the
/// plain Welford moments of f; the weighted side carries the self-normalized
/// numerator plus the squared-weight sums its variance estimate needs.
class MomentAccumulator {
 public:
  void add(double f) { add_weighted(f, 1.0); }
  void add_weighted(double f, double w);
  void merge(const MomentAccumulator& other);

  std::int64_t count() const { return count_; }
  double mean() const { return mean_; }
  double m2() const { return m2_; }
  double weight_sum() const { return w_sum_ + w_comp_; }
  double weighted_mean_num() const { return wf_sum_ + wf_comp_; }
  double w2_sum() const { return w2_sum_; }
  double w2f_sum() const { return w2f_sum_; }
  double w2f2_sum() const { return w2f2_sum_; }

 private:
  std::int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double w_sum_ = 0.0, w_comp_ = 0.0;
  double wf_sum_ = 0.0, wf_comp_ = 0.0;
  double w2_sum_ = 0.0;
  double w2f_sum_ = 0.0;
  double w2f2_sum_ = 0.0;
};

MomentAccumulator merge(const MomentAccumulator& a, const MomentAccumulator& b);

enum class EstimatorMode { Plain, SelfNormalized };

struct EstimateResult {
  double mean = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::int64_t samples = 0;
  EstimatorMode mode = EstimatorMode::Plain;
};

struct EstimateDiagnostics {
  std::uint64_t surface_redraws = 0;
};

// Monte Carlo estimates of the average width for every m in the query.
// The sample budget is split across `workers` logical streams derived as
// (seed.seed, seed.stream_id + k); results are deterministic for a fixed
// (seed, workers) pair regardless of thread count.  Surface queries use the
// self-normalized ratio estimator so the unknown density constant cancels.
std::map<int, EstimateResult> estimate_widths(WidthQuery query, std::int64_t samples,
                                              RngState seed, int workers,
                                              double ci_level = 0.99,
                                              EstimateDiagnostics* diag = nullptr);

// Serial reference path: identical worker split and merge order, plain loop.
// Kept for testing and benchmarking against the parallel kernel.
std::map<int, EstimateResult> estimate_widths_serial(WidthQuery query, std::int64_t samples,
                                                     RngState seed, int workers,
                                                     double ci_level = 0.99,
                                                     EstimateDiagnostics* diag = nullptr);

struct RatioCheck {
  double ratio = 0.0;
  double z_score = 0.0;
};

// Volume/cone estimate ratio on independent streams, with its z-score
// against n/(n+1).  The volume run uses stream ids offset by `workers`.
RatioCheck ratio_check_prop10(PNorm p, PNorm q, int n, int m, std::int64_t samples,
                              RngState seed, int workers = 1);

namespace detail {
// Phi^{-1}(q) for q in (0,1); rational approximation polished by Halley.
double inverse_normal_cdf(double q);
}

}  // namespace lpwidths
