// multipool: design generation, validation, analytic curves, simulation and
// design tuning for non-adaptive pooled testing.
//
// Exit codes: 0 success, 1 domain-level failure (invalid design, failed
// statistical comparison, infeasible tuning, inapplicable formula),
// 2 usage or parse error.

#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "multipool/analytics.hpp"
#include "multipool/curves.hpp"
#include "multipool/design.hpp"
#include "multipool/errors.hpp"
#include "multipool/matrix_io.hpp"
#include "multipool/montecarlo.hpp"

namespace {

using namespace multipool;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Raised for argument combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
  } else {
    io::write_file(path, contents);
  }
}

struct DesignArgs {
  std::uint32_t q = 0;
  std::uint32_t m = 0;
  std::string output;
  std::string format;
};

int run_design(const DesignArgs& a) {
  const PoolingMatrix matrix = build_multipool(MultipoolParams{a.q, a.m});
  std::string format = a.format;
  if (format.empty()) format = std::filesystem::path(a.output).extension() == ".csv" ? "csv" : "json";
  if (!a.output.empty()) {
    io::write_matrix(a.output, matrix, format == "csv" ? io::MatrixFormat::Csv : io::MatrixFormat::Json);
  }
  std::printf("n = %zu\nt = %zu\ncompression ratio n/t = %s\n", matrix.n(), matrix.t(),
              curves::format_number(static_cast<double>(matrix.n()) / static_cast<double>(matrix.t())).c_str());
  return kExitOk;
}

struct ValidateArgs {
  std::string matrix;
  std::uint32_t q = 0;
  std::uint32_t m = 0;
};

int run_validate(const ValidateArgs& a) {
  const PoolingMatrix matrix = io::read_matrix(a.matrix);
  const ValidationReport r = validate_multipool(matrix, a.q, a.m);
  std::printf("items n = %zu, pools t = %zu\n", matrix.n(), matrix.t());
  std::printf("max pairwise overlap = %u\n", r.max_pairwise_overlap);
  std::printf("violations = %zu\n", r.violations.size());
  for (const auto& v : r.violations) {
    std::printf("  %s", to_string(v.kind));
    for (auto i : v.indices) std::printf(" %zu", i);
    std::printf(" (value %u)\n", v.value);
  }
  std::printf("is_multipool = %s\n", r.is_multipool ? "true" : "false");
  return r.is_multipool ? kExitOk : kExitFailure;
}

struct ScenarioArgs {
  double rho = 0.05;
  std::uint32_t q = 16;
  std::uint32_t m = 4;
  std::uint32_t nc = 0;
  double pfp = 0.0;
  double pfn = 0.0;
  std::size_t n = 0;

  analytics::Scenario scenario() const { return analytics::Scenario{rho, q, m, nc, NoiseModel{pfp, pfn}, n}; }
};

void add_scenario_flags(CLI::App* cmd, ScenarioArgs& s) {
  cmd->add_option("--rho", s.rho, "prevalence")->capture_default_str();
  cmd->add_option("--q", s.q, "pool size")->capture_default_str();
  cmd->add_option("--m", s.m, "multiplicity (pools per item)")->capture_default_str();
  cmd->add_option("--nc", s.nc, "NCOMP parameter (0 = COMP)")->capture_default_str();
  cmd->add_option("--pfp", s.pfp, "false positive probability per pool")->capture_default_str();
  cmd->add_option("--pfn", s.pfn, "false negative probability per infected item")->capture_default_str();
  cmd->add_option("--n", s.n, "item count (default q^2)");
}

struct AnalyzeArgs {
  ScenarioArgs scenario;
  std::string statistic = "sens";
  std::string sweep = "rho";
  std::string grid;
  std::string series;
  std::string series_values;
  std::string output;
};

int run_analyze(const AnalyzeArgs& a) {
  curves::CurveRequest req;
  const auto stat = curves::parse_statistic(a.statistic);
  if (!stat) throw UsageError("unknown statistic '" + a.statistic + "'");
  const auto sweep = curves::parse_parameter(a.sweep);
  if (!sweep) throw UsageError("unknown sweep variable '" + a.sweep + "'");
  req.statistic = *stat;
  req.sweep = *sweep;
  req.grid = curves::parse_grid(a.grid);
  if (!a.series.empty()) {
    req.series = curves::parse_parameter(a.series);
    if (!req.series) throw UsageError("unknown series variable '" + a.series + "'");
    if (a.series_values.empty()) throw UsageError("--series needs --series-values");
    req.series_values = curves::parse_grid(a.series_values);
  }
  req.base = a.scenario.scenario();
  emit(a.output, curves::to_csv(curves::evaluate(req)));
  return kExitOk;
}

struct SimulateArgs {
  ScenarioArgs scenario;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  double z_threshold = 4.0;
  std::string matrix;
  std::string output;
};

int run_simulate(const SimulateArgs& a) {
  if (a.trials == 0) throw UsageError("--trials must be at least 1");
  if (a.threads == 0) throw UsageError("--threads must be at least 1");
  analytics::Scenario s = a.scenario.scenario();
  s.validate();
  mc::ExperimentConfig config;
  if (a.matrix.empty()) {
    if (s.n != 0 && s.n != std::size_t{s.q} * s.q) throw UsageError("--n must equal q^2 for the built-in design");
    config = mc::make_experiment(s, a.trials, a.seed);
  } else {
    config.design = io::read_matrix(a.matrix);
    if (s.n == 0) s.n = config.design.n();
    config.scenario = s;
    config.trials = a.trials;
    config.master_seed = a.seed;
  }
  config.threads = a.threads;
  config.z_threshold = a.z_threshold;
  const mc::ComparisonReport report = mc::compare(config);
  emit(a.output, mc::to_json(report));
  if (!a.output.empty() && a.output != "-") {
    for (const auto& row : report.rows) {
      std::printf("%-8s %-14s %s\n", row.statistic.c_str(), to_string(row.status), row.pass ? "pass" : "FAIL");
    }
    std::printf("max T_fn = %llu\n", static_cast<unsigned long long>(report.empirical.max_false_negatives));
  }
  return report.all_pass ? kExitOk : kExitFailure;
}

struct TuneArgs {
  double rho = 0.0;
  std::uint32_t q = 0;
  double pfp = 0.0;
  double pfn = 0.0;
  double epsilon = 0.0;
  std::optional<std::uint32_t> cap;
};

int run_tune(const TuneArgs& a) {
  try {
    const auto r = analytics::min_multiplicity(a.rho, a.q, NoiseModel{a.pfp, a.pfn}, a.epsilon, a.cap);
    std::printf("raw bound = %s\n", curves::format_number(r.raw_bound).c_str());
    std::printf("m = %u\n", r.m);
    std::printf("type I = %s\n", curves::format_number(r.type_one).c_str());
    std::printf("compression ratio q/m = %s\n", curves::format_number(r.compression_ratio).c_str());
    return kExitOk;
  } catch (const Infeasible& e) {
    std::printf("infeasible: raw bound = %s\n", curves::format_number(e.raw_bound()).c_str());
    throw;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multipool group-testing toolkit"};
  app.require_subcommand(1);
  std::function<int()> action;

  DesignArgs design;
  auto* cmd_design = app.add_subcommand("design", "build the canonical (q^2, q, m)-multipool");
  cmd_design->add_option("--q", design.q, "pool size (prime power)")->required();
  cmd_design->add_option("--m", design.m, "multiplicity, at most q+1")->required();
  cmd_design->add_option("-o,--output", design.output, "matrix file to write");
  cmd_design->add_option("--format", design.format, "json or csv (default: by extension, else json)")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd_design->callback([&] { action = [&] { return run_design(design); }; });

  ValidateArgs validate;
  auto* cmd_validate = app.add_subcommand("validate", "check a matrix file against the multipool conditions");
  cmd_validate->add_option("matrix,--matrix", validate.matrix, "matrix file (JSON or dense CSV)")->required();
  cmd_validate->add_option("--q", validate.q, "expected pool size")->required();
  cmd_validate->add_option("--m", validate.m, "expected multiplicity")->required();
  cmd_validate->callback([&] { action = [&] { return run_validate(validate); }; });

  AnalyzeArgs analyze;
  auto* cmd_analyze = app.add_subcommand("analyze", "emit an analytic curve as CSV");
  cmd_analyze->add_option("--stat", analyze.statistic,
                          "sens, spec, typeI, typeII, e_T, e_Tfp, e_Tfn, var_T_bound, var_Tfp_bound")
      ->capture_default_str();
  cmd_analyze->add_option("--sweep", analyze.sweep, "rho, q, m, nc, pfp, pfn or n")->capture_default_str();
  cmd_analyze->add_option("--grid", analyze.grid, "start:stop:step or comma-separated values")->required();
  cmd_analyze->add_option("--series", analyze.series, "optional second parameter, one curve per value");
  cmd_analyze->add_option("--series-values", analyze.series_values, "values for --series");
  cmd_analyze->add_option("-o,--output", analyze.output, "CSV file (default stdout)");
  add_scenario_flags(cmd_analyze, analyze.scenario);
  cmd_analyze->callback([&] { action = [&] { return run_analyze(analyze); }; });

  SimulateArgs simulate;
  auto* cmd_simulate = app.add_subcommand("simulate", "Monte Carlo comparison against the closed forms");
  add_scenario_flags(cmd_simulate, simulate.scenario);
  cmd_simulate->add_option("--trials", simulate.trials, "number of trials")->capture_default_str();
  cmd_simulate->add_option("--seed", simulate.seed, "master seed")->capture_default_str();
  cmd_simulate->add_option("--threads", simulate.threads, "worker threads")->capture_default_str();
  cmd_simulate->add_option("--z-threshold", simulate.z_threshold, "largest accepted |z|")->capture_default_str();
  cmd_simulate->add_option("--matrix", simulate.matrix, "use this matrix file instead of the built-in design");
  cmd_simulate->add_option("-o,--output", simulate.output, "JSON report file (default stdout)");
  cmd_simulate->callback([&] { action = [&] { return run_simulate(simulate); }; });

  TuneArgs tune;
  auto* cmd_tune = app.add_subcommand("tune", "smallest multiplicity meeting a Type I budget (COMP)");
  cmd_tune->add_option("--rho", tune.rho, "prevalence")->required();
  cmd_tune->add_option("--q", tune.q, "pool size")->required();
  cmd_tune->add_option("--pfp", tune.pfp, "false positive probability")->capture_default_str();
  cmd_tune->add_option("--pfn", tune.pfn, "false negative probability")->capture_default_str();
  cmd_tune->add_option("--epsilon", tune.epsilon, "Type I budget")->required();
  cmd_tune->add_option("--cap", tune.cap, "largest multiplicity considered (default q+1)");
  cmd_tune->callback([&] { action = [&] { return run_tune(tune); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    return action();
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kExitUsage;
  } catch (const NotApplicable& e) {
    std::fprintf(stderr, "not applicable: %s\n", e.what());
    return kExitFailure;
  } catch (const Infeasible& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return kExitFailure;
  } catch (const Error& e) {
    // DomainError, DesignBound, UnsupportedField, NoSolution: invalid parameters.
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
}
