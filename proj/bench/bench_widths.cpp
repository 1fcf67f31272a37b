// Compares the OpenMP estimation kernel against the serial reference path
// on identical worker splits.  The two must agree bit-for-bit; the benchmark
// reports throughput and the resulting speedup.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lpwidths/estimators.hpp"

using namespace lpwidths;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const std::int64_t samples = argc > 1 ? std::atoll(argv[1]) : 200'000;
  const int n = argc > 2 ? std::atoi(argv[2]) : 100;
#ifdef _OPENMP
  const int workers = omp_get_max_threads();
#else
  const int workers = 1;
#endif

  const PNorm p(0.5);
  WidthQuery query{p, PNorm::infinity(), n, {0, 1, 2, 4, 8}, MeasureSpec::cone(p, n)};
  const RngState seed{20260810, 0};

  std::printf("samples=%lld n=%d workers=%d\n", static_cast<long long>(samples), n, workers);

  auto t0 = std::chrono::steady_clock::now();
  const auto serial = estimate_widths_serial(query, samples, seed, workers);
  const double t_serial = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const auto parallel = estimate_widths(query, samples, seed, workers);
  const double t_parallel = seconds_since(t0);

  double max_diff = 0.0;
  for (const auto& [m, est] : serial) {
    const double d = std::abs(est.mean - parallel.at(m).mean);
    max_diff = std::max(max_diff, d);
  }

  std::printf("serial:   %.3f s  (%.0f samples/s)\n", t_serial, samples / t_serial);
  std::printf("parallel: %.3f s  (%.0f samples/s)\n", t_parallel, samples / t_parallel);
  std::printf("speedup:  %.2fx\n", t_serial / t_parallel);
  std::printf("max |serial - parallel| over m: %.3g\n", max_diff);
  if (max_diff != 0.0) {
    std::printf("FAIL: kernels disagree\n");
    return 1;
  }
  std::printf("kernels agree bit-for-bit\n");
  return 0;
}
