#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lpwidths/rng.hpp"
#include "lpwidths/sparse_approx.hpp"

namespace lpwidths {

enum class MeasureKind { Cone, Volume, Surface, Tensor };

/// Tagged choice of probability law on (or inside) the positive-orthant
/// l_p sphere.  Tensor carries a weight exponent beta > -1; the
/// sparsity-promoting member recomputes beta = p/n - 1 from (p, n).
class MeasureSpec {
 public:
  static MeasureSpec cone(PNorm p, int n);
  static MeasureSpec volume(PNorm p, int n);
  static MeasureSpec surface(PNorm p, int n);
  static MeasureSpec tensor(PNorm p, int n, double beta);
  static MeasureSpec tensor_sparse(PNorm p, int n);

  MeasureKind kind() const { return kind_; }
  PNorm p() const { return p_; }
  int n() const { return n_; }
  double beta() const { return beta_; }
  bool is_sparse_tensor() const { return sparse_; }

 private:
  MeasureSpec(MeasureKind kind, PNorm p, int n, double beta, bool sparse);
  MeasureKind kind_;
  PNorm p_;
  int n_;
  double beta_;
  bool sparse_;
};

/// A sampled point plus its (unnormalized) importance weight.  Weight is
/// exactly 1 for Cone/Volume/Tensor; for Surface it carries the density
/// value (sum_i x_i^(2p-2))^(1/2), to be used self-normalized downstream.
struct WeightedSample {
  std::vector<double> point;
  double weight = 1.0;
};

// One Gamma(shape) variate.  Squeeze-accept for shape >= 1; the U^(1/shape)
// boost below, carried in log space for shape < 0.1 (may round to 0).
double sample_gamma(double shape, Rng& rng);

// ln of a Gamma(shape) variate, exact in law; never underflows.
double sample_gamma_log(double shape, Rng& rng);

// Variate with density proportional to t^beta e^(-t^p) on (0, inf),
// realized as G^(1/p) with G ~ Gamma((beta+1)/p).
double sample_gen_gamma(PNorm p, double beta, Rng& rng);
double sample_gen_gamma_log(PNorm p, double beta, Rng& rng);

WeightedSample sample_cone(const MeasureSpec& spec, Rng& rng);
WeightedSample sample_volume(const MeasureSpec& spec, Rng& rng);
WeightedSample sample_tensor(const MeasureSpec& spec, Rng& rng);
WeightedSample sample_surface(const MeasureSpec& spec, Rng& rng,
                              std::uint64_t* redraws = nullptr);

// Dispatch on spec.kind().
WeightedSample sample(const MeasureSpec& spec, Rng& rng, std::uint64_t* redraws = nullptr);

// Buffer-reusing variant for hot loops; out.size() must equal spec.n().
// Returns the importance weight.
double sample_into(const MeasureSpec& spec, Rng& rng, std::span<double> out,
                   std::uint64_t* redraws = nullptr);

}  // namespace lpwidths
