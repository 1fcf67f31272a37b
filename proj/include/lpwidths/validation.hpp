#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lpwidths/rng.hpp"
#include "lpwidths/sparse_approx.hpp"

namespace lpwidths::validation {

struct Check {
  std::string name;
  bool passed = false;
  double statistic = 0.0;  // z-score, absolute error, or ratio, per detail
  std::string detail;
};

bool all_passed(const std::vector<Check>& checks);

// Plain Monte Carlo mean with standard error.
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  std::int64_t samples = 0;
};

// E of the m-th largest of n unnormalized gen-gamma(p, beta) draws.
MeanSe mc_order_statistic(PNorm p, double beta, int n, int m, std::int64_t samples,
                          RngState seed);

// E of prod_i omega_i^beta over n i.i.d. gen-gamma(p, 0) draws.
MeanSe mc_weighted_product(PNorm p, double beta, int n, std::int64_t samples, RngState seed);

// Identity and law suites; each check carries a z-score or error statistic.
std::vector<Check> suite_prop10(std::int64_t samples, RngState seed, int workers);
std::vector<Check> suite_lemma1(std::int64_t samples, RngState seed, int workers);
std::vector<Check> suite_lemma15(std::int64_t samples, RngState seed, int workers);
std::vector<Check> suite_surface_coincide(std::int64_t samples, RngState seed, int workers);
std::vector<Check> suite_thm17(std::int64_t samples, RngState seed, int workers);
std::vector<Check> suite_bounds(std::int64_t samples, RngState seed, int workers);
std::vector<Check> suite_specfun();
std::vector<Check> suite_samplers(std::int64_t samples, RngState seed);

// Individual families, reused by the acceptance suite.
std::vector<Check> check_thm6_stability(std::int64_t samples_each, RngState seed, int workers);
std::vector<Check> check_final1_convergence();
std::vector<Check> check_sampler_laws(std::int64_t samples, RngState seed);

// Dispatch by suite name; throws std::invalid_argument for unknown names.
std::vector<Check> run_suite(const std::string& name, std::int64_t samples, RngState seed,
                             int workers);

const std::vector<std::string>& suite_names();

}  // namespace lpwidths::validation
