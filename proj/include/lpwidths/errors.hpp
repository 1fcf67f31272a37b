#pragma once

#include <stdexcept>
#include <string>

namespace lpwidths {

// Self-normalized estimate whose weight mass collapsed to zero.
struct DegenerateEstimateError : std::runtime_error {
  explicit DegenerateEstimateError(const std::string& what) : std::runtime_error(what) {}
};

// Ratio test whose denominator estimate is indistinguishable from zero.
struct DegenerateRatioError : std::runtime_error {
  explicit DegenerateRatioError(const std::string& what) : std::runtime_error(what) {}
};

// Quadrature or iteration failed to reach its accuracy target.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lpwidths
