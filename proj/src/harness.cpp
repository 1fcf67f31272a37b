#include "lpwidths/harness.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "lpwidths/analytic.hpp"

namespace lpwidths::harness {

void ExperimentConfig::validate() const {
  if (samples < 10) throw std::domain_error("ExperimentConfig: samples must be >= 10");
  if (!(ci_level > 0.0 && ci_level < 1.0))
    throw std::domain_error("ExperimentConfig: ci_level must lie in (0, 1)");
  if (workers < 1) throw std::domain_error("ExperimentConfig: workers must be >= 1");
}

std::string format_real17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* csv_header() {
  return "p,q,n,m,measure,estimator_mode,samples,mean,std_error,ci_low,ci_high,seed,"
         "analytic_value,envelope_value";
}

std::string measure_tag(const MeasureSpec& spec) {
  switch (spec.kind()) {
    case MeasureKind::Cone: return "cone";
    case MeasureKind::Volume: return "volume";
    case MeasureKind::Surface: return "surface";
    case MeasureKind::Tensor:
      return spec.is_sparse_tensor() ? "tensor-sparse" : "tensor:" + format_real17(spec.beta());
  }
  return "unknown";
}

std::string mode_tag(EstimatorMode mode) {
  return mode == EstimatorMode::Plain ? "plain" : "self_normalized";
}

std::string to_csv_line(const ResultRow& r) {
  std::ostringstream os;
  os << format_real17(r.p) << ',' << format_real17(r.q) << ',' << r.n << ',' << r.m << ','
     << r.measure << ',' << r.estimator_mode << ',' << r.samples << ','
     << format_real17(r.mean) << ',' << format_real17(r.std_error) << ','
     << format_real17(r.ci_low) << ',' << format_real17(r.ci_high) << ',' << r.seed << ','
     << (r.analytic_value ? format_real17(*r.analytic_value) : "") << ','
     << (r.envelope_value ? format_real17(*r.envelope_value) : "");
  return os.str();
}

namespace {

void json_number_or_inf(std::ostringstream& os, double v) {
  if (std::isfinite(v))
    os << format_real17(v);
  else
    os << '"' << format_real17(v) << '"';
}

}  // namespace

std::string rows_to_json(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  os << "[\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ResultRow& r = rows[i];
    os << "  {\"p\": ";
    json_number_or_inf(os, r.p);
    os << ", \"q\": ";
    json_number_or_inf(os, r.q);
    os << ", \"n\": " << r.n << ", \"m\": " << r.m << ", \"measure\": \"" << r.measure
       << "\", \"estimator_mode\": \"" << r.estimator_mode << "\", \"samples\": " << r.samples
       << ", \"mean\": " << format_real17(r.mean) << ", \"std_error\": "
       << format_real17(r.std_error) << ", \"ci_low\": " << format_real17(r.ci_low)
       << ", \"ci_high\": " << format_real17(r.ci_high) << ", \"seed\": " << r.seed
       << ", \"analytic_value\": ";
    os << (r.analytic_value ? format_real17(*r.analytic_value) : "null");
    os << ", \"envelope_value\": ";
    os << (r.envelope_value ? format_real17(*r.envelope_value) : "null");
    os << '}' << (i + 1 < rows.size() ? "," : "") << '\n';
  }
  os << "]\n";
  return os.str();
}

std::vector<ResultRow> run_estimate(const ExperimentConfig& config) {
  config.validate();
  WidthQuery query = config.query;
  query.validate();
  const auto results = estimate_widths(query, config.samples, RngState{config.seed, 0},
                                       config.workers, config.ci_level);
  const bool q_inf = query.q.is_infinite();
  const bool sparse = query.measure.kind() == MeasureKind::Tensor &&
                      query.measure.is_sparse_tensor();
  const bool cone_like = query.measure.kind() == MeasureKind::Cone ||
                         query.measure.kind() == MeasureKind::Surface;

  std::vector<ResultRow> rows;
  rows.reserve(results.size());
  for (const auto& [m, est] : results) {
    ResultRow r;
    r.p = query.p.value();
    r.q = query.q.value();
    r.n = query.n;
    r.m = m;
    r.measure = measure_tag(query.measure);
    r.estimator_mode = mode_tag(est.mode);
    r.samples = est.samples;
    r.mean = est.mean;
    r.std_error = est.std_error;
    r.ci_low = est.ci_low;
    r.ci_high = est.ci_high;
    r.seed = config.seed;
    if (sparse && q_inf)
      r.analytic_value = analytic::theorem17_quadrature(query.p, query.n, m + 1);
    if (cone_like && q_inf)
      r.envelope_value = analytic::bound_envelope(analytic::EnvelopeKind::Thm6Upper, query.p,
                                                  query.q, query.n, m);
    else if (!q_inf && m == 0)
      r.envelope_value = analytic::bound_envelope(analytic::EnvelopeKind::Prop12, query.p,
                                                  query.q, query.n, 0);
    rows.push_back(std::move(r));
  }
  return rows;
}

Figure1Result run_figure1(const std::vector<double>& p_list, int n, std::int64_t samples,
                          std::uint64_t seed, int workers) {
  if (n < 2) throw std::domain_error("figure1: n must be >= 2");
  Figure1Result out;
  std::vector<int> all_m(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) all_m[static_cast<std::size_t>(m)] = m;

  std::uint64_t stream = 0;
  for (double pv : p_list) {
    const PNorm p(pv);
    const PNorm q = PNorm::infinity();
    for (int panel = 0; panel < 2; ++panel) {
      const MeasureSpec measure =
          panel == 0 ? MeasureSpec::cone(p, n) : MeasureSpec::tensor_sparse(p, n);
      WidthQuery query{p, q, n, all_m, measure};
      const auto res = estimate_widths(query, samples, RngState{seed, stream}, workers);
      stream += static_cast<std::uint64_t>(workers);
      for (const auto& [m, est] : res) {
        Figure1Row row;
        row.p = pv;
        row.n = n;
        row.m = m;
        row.samples = est.samples;
        row.mean = est.mean;
        row.std_error = est.std_error;
        row.value = panel == 0 ? std::pow(static_cast<double>(n), 1.0 / pv) * est.mean
                               : std::log10(est.mean);
        (panel == 0 ? out.panel_a : out.panel_b).push_back(row);
      }
    }
  }
  return out;
}

std::string figure1_csv(const std::vector<Figure1Row>& rows) {
  std::ostringstream os;
  os << "p,n,m,samples,mean,std_error,value\n";
  for (const Figure1Row& r : rows) {
    os << format_real17(r.p) << ',' << r.n << ',' << r.m << ',' << r.samples << ','
       << format_real17(r.mean) << ',' << format_real17(r.std_error) << ','
       << format_real17(r.value) << '\n';
  }
  return os.str();
}

}  // namespace lpwidths::harness
