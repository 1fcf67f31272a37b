#include "lpwidths/sparse_approx.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace lpwidths {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::domain_error(msg);
}

// Neumaier compensated accumulation.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    comp += (std::abs(sum) >= std::abs(v)) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace

PNorm::PNorm(double value) : v_(value) {
  if (std::isnan(value) || value <= 0.0)
    throw std::domain_error("PNorm: exponent must lie in (0, inf]");
}

PNorm PNorm::infinity() { return PNorm(std::numeric_limits<double>::infinity()); }

bool PNorm::is_infinite() const { return std::isinf(v_); }

double PNorm::reciprocal() const { return is_infinite() ? 0.0 : 1.0 / v_; }

PositiveVector::PositiveVector(std::vector<double> entries) : entries_(std::move(entries)) {
  require(!entries_.empty(), "PositiveVector: length must be >= 1");
  for (double v : entries_)
    require(std::isfinite(v) && v >= 0.0, "PositiveVector: entries must be finite and >= 0");
}

SimplexPoint::SimplexPoint(PositiveVector vector, PNorm p)
    : vector_(std::move(vector)), p_(p) {
  const double norm = quasi_norm(vector_, p_);
  if (!(std::abs(norm - 1.0) <= kNormTolerance))
    throw std::domain_error("SimplexPoint: vector is not on the unit l_p sphere");
}

double quasi_norm(std::span<const double> x, PNorm q) {
  if (q.is_infinite()) {
    double mx = 0.0;
    for (double v : x) mx = std::max(mx, v);
    return mx;
  }
  const double qv = q.value();
  CompensatedSum acc;
  for (double v : x) acc.add(std::pow(v, qv));
  const double s = acc.value();
  return s > 0.0 ? std::pow(s, 1.0 / qv) : 0.0;
}

std::vector<double> rearrange(std::span<const double> x) {
  std::vector<double> out(x.begin(), x.end());
  // Stable so that tied entries keep their original relative order.
  std::stable_sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double best_m_term_error(std::span<const double> x, int m, PNorm q) {
  const int n = static_cast<int>(x.size());
  require(m >= 0 && m <= n, "best_m_term_error: m must lie in [0, n]");
  std::vector<double> sorted = rearrange(x);
  if (q.is_infinite()) return m == n ? 0.0 : sorted[m];
  const double qv = q.value();
  // Tail accumulated largest-first with compensation; small exponents
  // amplify rounding otherwise.
  CompensatedSum acc;
  for (int j = m; j < n; ++j) acc.add(std::pow(sorted[j], qv));
  const double s = acc.value();
  return s > 0.0 ? std::pow(s, 1.0 / qv) : 0.0;
}

WidthBounds width_bounds(PNorm p, PNorm q, int m) {
  require(m >= 0, "width_bounds: m must be >= 0");
  require(p <= q, "width_bounds: requires p <= q");
  const double expo = q.reciprocal() - p.reciprocal();
  const double upper = std::pow(static_cast<double>(m + 1), expo);
  return {std::exp2(-p.reciprocal()) * upper, upper};
}

PositiveVector extremal_witness(PNorm p, int m, int n) {
  require(!p.is_infinite(), "extremal_witness: requires p < inf");
  require(m >= 0 && m + 1 <= n, "extremal_witness: requires m + 1 <= n");
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  const double v = std::pow(static_cast<double>(m + 1), -p.reciprocal());
  for (int j = 0; j <= m; ++j) x[static_cast<std::size_t>(j)] = v;
  return PositiveVector(std::move(x));
}

}  // namespace lpwidths
