#pragma once

#include <span>
#include <vector>

namespace lpwidths {

/// Quasi-norm exponent in (0, inf], with inf representable explicitly.
class PNorm {
 public:
  explicit PNorm(double value);
  static PNorm infinity();

  double value() const { return v_; }
  bool is_infinite() const;
  // 1/p with 1/inf read as 0.
  double reciprocal() const;

  friend bool operator==(PNorm a, PNorm b) { return a.v_ == b.v_; }
  friend bool operator<=(PNorm a, PNorm b) { return a.v_ <= b.v_; }

 private:
  double v_;
};

/// A finite vector with nonnegative finite entries (restriction to the
/// positive orthant; signs never matter for the quantities computed here).
class PositiveVector {
 public:
  explicit PositiveVector(std::vector<double> entries);

  const std::vector<double>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  operator std::span<const double>() const { return entries_; }

 private:
  std::vector<double> entries_;
};

/// A PositiveVector on the unit l_p sphere: | ||x||_p - 1 | <= 1e-9.
class SimplexPoint {
 public:
  SimplexPoint(PositiveVector vector, PNorm p);

  const PositiveVector& vector() const { return vector_; }
  PNorm p() const { return p_; }

  static constexpr double kNormTolerance = 1e-9;

 private:
  PositiveVector vector_;
  PNorm p_;
};

// (sum_j x_j^q)^(1/q) for finite q, max_j x_j for q = inf.  Entries are
// assumed nonnegative (validated at PositiveVector construction).
double quasi_norm(std::span<const double> x, PNorm q);

// Non-increasing rearrangement; a sorted permutation of the input.
std::vector<double> rearrange(std::span<const double> x);

// Best m-term approximation error: the tail quasi-norm of the rearrangement
// past index m.  Requires 0 <= m <= n.
double best_m_term_error(std::span<const double> x, int m, PNorm q);

struct WidthBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Classical deterministic width bounds 2^(-1/p) (m+1)^(1/q-1/p) <= sigma <=
// (m+1)^(1/q-1/p), for 0 < p <= q <= inf.
WidthBounds width_bounds(PNorm p, PNorm q, int m);

// The worst-case vector: m+1 leading entries equal to (m+1)^(-1/p), rest 0.
PositiveVector extremal_witness(PNorm p, int m, int n);

}  // namespace lpwidths
