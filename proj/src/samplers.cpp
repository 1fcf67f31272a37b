#include "lpwidths/samplers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lpwidths/errors.hpp"

namespace lpwidths {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::domain_error(msg);
}

// Marsaglia-Tsang squeeze-accept sampler, shape >= 1.
double gamma_mt(double shape, Rng& rng) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open01();
    if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

double sample_gamma(double shape, Rng& rng) {
  require(std::isfinite(shape) && shape > 0.0, "sample_gamma: shape must be finite and > 0");
  if (shape >= 1.0) return gamma_mt(shape, rng);
  if (shape >= 0.1) {
    const double g = gamma_mt(shape + 1.0, rng);
    return g * std::pow(rng.uniform_open01(), 1.0 / shape);
  }
  // Tiny shapes underflow the linear boost; assemble in log space.  The
  // result may round to 0 for extreme draws.
  return std::exp(sample_gamma_log(shape, rng));
}

double sample_gamma_log(double shape, Rng& rng) {
  require(std::isfinite(shape) && shape > 0.0, "sample_gamma_log: shape must be finite and > 0");
  if (shape >= 1.0) return std::log(gamma_mt(shape, rng));
  const double g = gamma_mt(shape + 1.0, rng);
  return std::log(g) + std::log(rng.uniform_open01()) / shape;
}

namespace {

double gen_gamma_shape(PNorm p, double beta) {
  require(!p.is_infinite(), "sample_gen_gamma: requires p < inf");
  require(std::isfinite(beta) && beta > -1.0, "sample_gen_gamma: requires beta > -1");
  return (beta + 1.0) / p.value();
}

}  // namespace

double sample_gen_gamma(PNorm p, double beta, Rng& rng) {
  const double shape = gen_gamma_shape(p, beta);
  if (shape < 0.1) return std::exp(sample_gamma_log(shape, rng) / p.value());
  return std::pow(sample_gamma(shape, rng), 1.0 / p.value());
}

double sample_gen_gamma_log(PNorm p, double beta, Rng& rng) {
  const double shape = gen_gamma_shape(p, beta);
  return sample_gamma_log(shape, rng) / p.value();
}

MeasureSpec::MeasureSpec(MeasureKind kind, PNorm p, int n, double beta, bool sparse)
    : kind_(kind), p_(p), n_(n), beta_(beta), sparse_(sparse) {
  require(n >= 2, "MeasureSpec: dimension must be >= 2");
  require(!p.is_infinite(), "MeasureSpec: requires p < inf");
  if (kind == MeasureKind::Tensor)
    require(std::isfinite(beta) && beta > -1.0, "MeasureSpec: tensor weight requires beta > -1");
}

MeasureSpec MeasureSpec::cone(PNorm p, int n) {
  return {MeasureKind::Cone, p, n, 0.0, false};
}
MeasureSpec MeasureSpec::volume(PNorm p, int n) {
  return {MeasureKind::Volume, p, n, 0.0, false};
}
MeasureSpec MeasureSpec::surface(PNorm p, int n) {
  return {MeasureKind::Surface, p, n, 0.0, false};
}
MeasureSpec MeasureSpec::tensor(PNorm p, int n, double beta) {
  return {MeasureKind::Tensor, p, n, beta, false};
}
MeasureSpec MeasureSpec::tensor_sparse(PNorm p, int n) {
  // beta recomputed from (p, n); never accepted as an input.
  return {MeasureKind::Tensor, p, n, p.value() / n - 1.0, true};
}

namespace {

// i.i.d. gen-gamma draws normalized in l_p.  Linear arithmetic: for beta = 0
// the coordinate logs are bounded by |log G| / p, so nothing underflows.
void fill_cone_direction(const MeasureSpec& spec, Rng& rng, std::span<double> out) {
  const double pv = spec.p().value();
  const int n = spec.n();
  double norm_pow = 0.0;
  for (int i = 0; i < n; ++i) {
    out[i] = sample_gen_gamma(spec.p(), 0.0, rng);
    norm_pow += std::pow(out[i], pv);
  }
  const double norm = std::pow(norm_pow, 1.0 / pv);
  for (int i = 0; i < n; ++i) out[i] /= norm;
}

// Tensor directions go through log space: for beta near -1 the raw draws
// span thousands of orders of magnitude, so the l_p norm is a log-sum-exp.
void fill_tensor_direction(const MeasureSpec& spec, Rng& rng, std::span<double> out) {
  const double pv = spec.p().value();
  const int n = spec.n();
  double max_lp = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    out[i] = sample_gen_gamma_log(spec.p(), spec.beta(), rng);  // log coordinate
    max_lp = std::max(max_lp, pv * out[i]);
  }
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += std::exp(pv * out[i] - max_lp);
  const double log_norm = (max_lp + std::log(sum)) / pv;
  for (int i = 0; i < n; ++i) out[i] = std::exp(out[i] - log_norm);
}

// Unnormalized surface density (sum_i x_i^(2p-2))^(1/2), with the smallest
// coordinate factored out when the exponent is negative so the sum cannot
// overflow.  Returns a non-finite value only when a coordinate is zero.
double surface_weight(std::span<const double> x, double pv) {
  const double e = 2.0 * pv - 2.0;
  if (e == 0.0) return std::sqrt(static_cast<double>(x.size()));
  if (e > 0.0) {
    double s = 0.0;
    for (double v : x) s += std::pow(v, e);
    return std::sqrt(s);
  }
  double xmin = std::numeric_limits<double>::infinity();
  for (double v : x) xmin = std::min(xmin, v);
  if (xmin <= 0.0) return std::numeric_limits<double>::infinity();
  double s = 0.0;
  for (double v : x) s += std::pow(v / xmin, e);
  return std::pow(xmin, pv - 1.0) * std::sqrt(s);
}

}  // namespace

double sample_into(const MeasureSpec& spec, Rng& rng, std::span<double> out,
                   std::uint64_t* redraws) {
  require(static_cast<int>(out.size()) == spec.n(), "sample_into: buffer size != n");
  switch (spec.kind()) {
    case MeasureKind::Cone:
      fill_cone_direction(spec, rng, out);
      return 1.0;
    case MeasureKind::Volume: {
      fill_cone_direction(spec, rng, out);
      const double r = std::pow(rng.uniform_open01(), 1.0 / spec.n());
      for (double& v : out) v *= r;
      return 1.0;
    }
    case MeasureKind::Tensor:
      fill_tensor_direction(spec, rng, out);
      return 1.0;
    case MeasureKind::Surface: {
      for (;;) {
        fill_cone_direction(spec, rng, out);
        const double w = surface_weight(out, spec.p().value());
        if (std::isfinite(w) && w > 0.0) return w;
        if (redraws) ++*redraws;
      }
    }
  }
  throw std::logic_error("sample_into: unreachable");
}

namespace {

WeightedSample sample_checked(const MeasureSpec& spec, MeasureKind expected, Rng& rng,
                              std::uint64_t* redraws, const char* msg) {
  require(spec.kind() == expected, msg);
  WeightedSample s;
  s.point.resize(static_cast<std::size_t>(spec.n()));
  s.weight = sample_into(spec, rng, s.point, redraws);
  return s;
}

}  // namespace

WeightedSample sample_cone(const MeasureSpec& spec, Rng& rng) {
  return sample_checked(spec, MeasureKind::Cone, rng, nullptr, "sample_cone: spec.kind != Cone");
}

WeightedSample sample_volume(const MeasureSpec& spec, Rng& rng) {
  return sample_checked(spec, MeasureKind::Volume, rng, nullptr,
                        "sample_volume: spec.kind != Volume");
}

WeightedSample sample_tensor(const MeasureSpec& spec, Rng& rng) {
  return sample_checked(spec, MeasureKind::Tensor, rng, nullptr,
                        "sample_tensor: spec.kind != Tensor");
}

WeightedSample sample_surface(const MeasureSpec& spec, Rng& rng, std::uint64_t* redraws) {
  return sample_checked(spec, MeasureKind::Surface, rng, redraws,
                        "sample_surface: spec.kind != Surface");
}

WeightedSample sample(const MeasureSpec& spec, Rng& rng, std::uint64_t* redraws) {
  WeightedSample s;
  s.point.resize(static_cast<std::size_t>(spec.n()));
  s.weight = sample_into(spec, rng, s.point, redraws);
  return s;
}

}  // namespace lpwidths
