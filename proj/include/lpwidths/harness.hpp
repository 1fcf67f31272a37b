#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lpwidths/estimators.hpp"

namespace lpwidths::harness {

enum class OutputFormat { Csv, Json };

struct ExperimentConfig {
  WidthQuery query;
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  int workers = 1;
  double ci_level = 0.99;
  OutputFormat output_format = OutputFormat::Csv;
  std::string output_path;
  bool include_timestamp = true;

  void validate() const;
};

/// One emitted line: estimate plus the matching analytic / envelope values
/// where a closed form or shape function applies.
struct ResultRow {
  double p = 0.0;  // inf encoded as the literal "inf" when serialized
  double q = 0.0;
  int n = 0;
  int m = 0;
  std::string measure;
  std::string estimator_mode;
  std::int64_t samples = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t seed = 0;
  std::optional<double> analytic_value;
  std::optional<double> envelope_value;
};

// 17 significant digits; round-trips exactly.  Infinities serialize as
// "inf"/"-inf", NaN as "nan".
std::string format_real17(double v);

const char* csv_header();
std::string to_csv_line(const ResultRow& row);
std::string rows_to_json(const std::vector<ResultRow>& rows);

std::string measure_tag(const MeasureSpec& spec);
std::string mode_tag(EstimatorMode mode);

// Runs the estimate and assembles one row per m.
std::vector<ResultRow> run_estimate(const ExperimentConfig& config);

struct Figure1Row {
  double p = 0.0;
  int n = 0;
  int m = 0;
  std::int64_t samples = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double value = 0.0;  // n^(1/p) * mean (panel A), log10(mean) (panel B)
};

struct Figure1Result {
  std::vector<Figure1Row> panel_a;
  std::vector<Figure1Row> panel_b;
};

// Panel A: scaled cone-measure widths; panel B: log10 widths under the
// sparsity-promoting tensor measure.  All m in [0, n-1] for each p.
Figure1Result run_figure1(const std::vector<double>& p_list, int n, std::int64_t samples,
                          std::uint64_t seed, int workers);

std::string figure1_csv(const std::vector<Figure1Row>& rows);

}  // namespace lpwidths::harness
