// Command-line front end: width estimation sweeps, the two-panel experiment,
// identity validation suites, and direct access to the analytic kernels.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lpwidths/analytic.hpp"
#include "lpwidths/errors.hpp"
#include "lpwidths/estimators.hpp"
#include "lpwidths/harness.hpp"
#include "lpwidths/validation.hpp"

namespace {

using namespace lpwidths;

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

PNorm parse_pnorm(const std::string& text, const char* field) {
  if (text == "inf" || text == "Inf" || text == "INF" || text == "infinity")
    return PNorm::infinity();
  try {
    return PNorm(std::stod(text));
  } catch (const std::exception&) {
    throw UsageError(std::string(field) + ": expected a positive real or 'inf', got '" +
                     text + "'");
  }
}

std::vector<int> parse_m_values(const std::string& text, int n) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) return {std::stoi(text)};
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    if (lo > hi) throw UsageError("--m: empty range '" + text + "'");
    std::vector<int> out;
    for (int m = lo; m <= hi; ++m) out.push_back(m);
    return out;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError("--m: expected <int> or <int..int>, got '" + text + "'");
  }
  (void)n;
}

MeasureSpec parse_measure(const std::string& tag, PNorm p, int n) {
  if (tag == "cone") return MeasureSpec::cone(p, n);
  if (tag == "volume") return MeasureSpec::volume(p, n);
  if (tag == "surface") return MeasureSpec::surface(p, n);
  if (tag == "tensor-sparse") return MeasureSpec::tensor_sparse(p, n);
  if (tag.rfind("tensor:", 0) == 0) {
    try {
      return MeasureSpec::tensor(p, n, std::stod(tag.substr(7)));
    } catch (const std::domain_error&) {
      throw;
    } catch (const std::exception&) {
      throw UsageError("--measure: bad tensor beta in '" + tag + "'");
    }
  }
  throw UsageError("--measure: expected cone|volume|surface|tensor:<beta>|tensor-sparse, got '" +
                   tag + "'");
}

int default_workers() {
  if (const char* env = std::getenv("LPWIDTHS_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w >= 1) return w;
    } catch (const std::exception&) {
    }
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::string timestamp_line() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[64];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return std::string("# timestamp: ") + buf + "\n";
}

void write_or_throw(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::ios_base::failure("write to '" + path + "' failed");
}

struct CommonOpts {
  std::string p_text = "1";
  std::string q_text = "inf";
  int n = 100;
  std::string m_text = "0";
  std::string measure_text = "cone";
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  int workers = default_workers();
  double ci = 0.99;
  std::string format_text = "csv";
  std::string out_path;
  bool no_timestamp = false;
};

int cmd_estimate(const CommonOpts& o) {
  const PNorm p = parse_pnorm(o.p_text, "--p");
  const PNorm q = parse_pnorm(o.q_text, "--q");
  harness::ExperimentConfig config{
      WidthQuery{p, q, o.n, parse_m_values(o.m_text, o.n), parse_measure(o.measure_text, p, o.n)},
      o.samples,
      o.seed,
      o.workers,
      o.ci,
      o.format_text == "json" ? harness::OutputFormat::Json : harness::OutputFormat::Csv,
      o.out_path,
      !o.no_timestamp};
  if (o.format_text != "csv" && o.format_text != "json")
    throw UsageError("--format: expected csv or json, got '" + o.format_text + "'");

  const std::vector<harness::ResultRow> rows = harness::run_estimate(config);

  std::ostringstream body;
  if (config.output_format == harness::OutputFormat::Csv) {
    if (config.include_timestamp) body << timestamp_line();
    body << harness::csv_header() << '\n';
    for (const auto& r : rows) body << harness::to_csv_line(r) << '\n';
  } else {
    body << harness::rows_to_json(rows);
  }

  std::ostream& summary = o.out_path.empty() ? std::cerr : std::cout;
  for (const auto& r : rows) {
    summary << "m=" << r.m << " measure=" << r.measure << " mean=" << harness::format_real17(r.mean)
            << " std_error=" << harness::format_real17(r.std_error) << " ci=["
            << harness::format_real17(r.ci_low) << ", " << harness::format_real17(r.ci_high)
            << "]\n";
  }
  if (o.out_path.empty())
    std::cout << body.str();
  else
    write_or_throw(o.out_path, body.str());
  return kExitOk;
}

int cmd_figure1(std::vector<double> p_list, int n, std::int64_t samples, std::uint64_t seed,
                int workers, const std::string& out_dir, bool no_timestamp) {
  if (p_list.empty()) p_list = {0.5, 1.0, 2.0};
  const harness::Figure1Result fig = harness::run_figure1(p_list, n, samples, seed, workers);
  const std::string stamp = no_timestamp ? "" : timestamp_line();
  write_or_throw(out_dir + "/figure1_panelA.csv", stamp + harness::figure1_csv(fig.panel_a));
  write_or_throw(out_dir + "/figure1_panelB.csv", stamp + harness::figure1_csv(fig.panel_b));
  std::cout << "wrote " << out_dir << "/figure1_panelA.csv (" << fig.panel_a.size()
            << " rows) and " << out_dir << "/figure1_panelB.csv (" << fig.panel_b.size()
            << " rows)\n";
  return kExitOk;
}

int cmd_validate(const std::string& suite, std::int64_t samples, std::uint64_t seed,
                 int workers) {
  std::vector<validation::Check> checks;
  try {
    checks = validation::run_suite(suite, samples, RngState{seed, 0}, workers);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  for (const auto& c : checks)
    std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << '\n';
  const bool ok = validation::all_passed(checks);
  std::cout << (ok ? "suite passed" : "suite FAILED") << " (" << checks.size() << " checks)\n";
  return ok ? kExitOk : kExitValidationFailure;
}

int cmd_analytic(const std::string& quantity, const std::string& p_text,
                 const std::string& q_text, int n, int m, const std::string& kind_text) {
  const PNorm p = parse_pnorm(p_text, "--p");
  if (quantity == "theorem17") {
    std::cout << harness::format_real17(analytic::theorem17_quadrature(p, n, m)) << '\n';
  } else if (quantity == "theorem17-bounds") {
    const auto b = analytic::theorem17_bounds(p, n, m);
    std::cout << harness::format_real17(b.lower) << ' ' << harness::format_real17(b.upper)
              << '\n';
  } else if (quantity == "bridge-lemma1") {
    std::cout << harness::format_real17(analytic::bridge_lemma1(p, n).value) << '\n';
  } else if (quantity == "envelope") {
    const PNorm q = parse_pnorm(q_text, "--q");
    analytic::EnvelopeKind kind;
    if (kind_text == "thm6-upper") kind = analytic::EnvelopeKind::Thm6Upper;
    else if (kind_text == "thm6-lower") kind = analytic::EnvelopeKind::Thm6Lower;
    else if (kind_text == "thm9") kind = analytic::EnvelopeKind::Thm9Upper;
    else if (kind_text == "prop12") kind = analytic::EnvelopeKind::Prop12;
    else if (kind_text == "eq1") kind = analytic::EnvelopeKind::Eq1;
    else throw UsageError("--kind: expected thm6-upper|thm6-lower|thm9|prop12|eq1");
    std::cout << harness::format_real17(analytic::bound_envelope(kind, p, q, n, m)) << '\n';
  } else if (quantity == "limit-lemma17") {
    std::cout << harness::format_real17(analytic::limit_constant_lemma17()) << '\n';
  } else {
    throw UsageError(
        "--quantity: expected theorem17|theorem17-bounds|bridge-lemma1|envelope|limit-lemma17");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"average best m-term width estimation on l_p spheres"};
  app.require_subcommand(1);

  CommonOpts opts;

  CLI::App* est = app.add_subcommand("estimate", "Monte Carlo width estimates");
  est->add_option("--p", opts.p_text, "exponent p (positive real or inf)");
  est->add_option("--q", opts.q_text, "exponent q (positive real or inf)");
  est->add_option("--n", opts.n, "dimension (>= 2)");
  est->add_option("--m", opts.m_text, "kept-term count: <int> or <int..int>");
  est->add_option("--measure", opts.measure_text,
                  "cone|volume|surface|tensor:<beta>|tensor-sparse");
  est->add_option("--samples", opts.samples, "Monte Carlo budget");
  est->add_option("--seed", opts.seed, "stream seed");
  est->add_option("--workers", opts.workers, "logical worker streams");
  est->add_option("--ci", opts.ci, "confidence level in (0,1)");
  est->add_option("--format", opts.format_text, "csv|json");
  est->add_option("--out", opts.out_path, "output file (default: stdout)");
  est->add_flag("--no-timestamp", opts.no_timestamp, "suppress the timestamp header line");

  std::vector<double> fig_p;
  int fig_n = 100;
  std::int64_t fig_samples = 1'000'000;
  std::uint64_t fig_seed = 0;
  int fig_workers = default_workers();
  std::string fig_out_dir = ".";
  bool fig_no_timestamp = false;
  CLI::App* fig = app.add_subcommand("figure1", "two-panel width decay experiment");
  fig->add_option("--p", fig_p, "exponents (default 0.5 1 2)");
  fig->add_option("--n", fig_n, "dimension");
  fig->add_option("--samples", fig_samples, "Monte Carlo budget per measure");
  fig->add_option("--seed", fig_seed, "stream seed");
  fig->add_option("--workers", fig_workers, "logical worker streams");
  fig->add_option("--out", fig_out_dir, "output directory");
  fig->add_flag("--no-timestamp", fig_no_timestamp, "suppress the timestamp header line");

  std::string val_suite;
  std::int64_t val_samples = 100'000;
  std::uint64_t val_seed = 0;
  int val_workers = default_workers();
  CLI::App* val = app.add_subcommand("validate", "identity and law validation suites");
  val->add_option("--suite", val_suite,
                  "prop10|lemma1|lemma15|surface_coincide|thm17|bounds|specfun|samplers")
      ->required();
  val->add_option("--samples", val_samples, "Monte Carlo budget per check");
  val->add_option("--seed", val_seed, "stream seed");
  val->add_option("--workers", val_workers, "logical worker streams");

  std::string ana_quantity;
  std::string ana_p = "1", ana_q = "inf", ana_kind = "thm6-upper";
  int ana_n = 100, ana_m = 1;
  CLI::App* ana = app.add_subcommand("analytic", "closed-form and quadrature values");
  ana->add_option("--quantity", ana_quantity,
                  "theorem17|theorem17-bounds|bridge-lemma1|envelope|limit-lemma17")
      ->required();
  ana->add_option("--p", ana_p, "exponent p");
  ana->add_option("--q", ana_q, "exponent q (envelope only)");
  ana->add_option("--n", ana_n, "dimension");
  ana->add_option("--m", ana_m, "term index");
  ana->add_option("--kind", ana_kind, "thm6-upper|thm6-lower|thm9|prop12|eq1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (est->parsed()) return cmd_estimate(opts);
    if (fig->parsed())
      return cmd_figure1(fig_p, fig_n, fig_samples, fig_seed, fig_workers, fig_out_dir,
                         fig_no_timestamp);
    if (val->parsed()) return cmd_validate(val_suite, val_samples, val_seed, val_workers);
    if (ana->parsed())
      return cmd_analytic(ana_quantity, ana_p, ana_q, ana_n, ana_m, ana_kind);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidationFailure;
  }
  return kExitUsage;
}
