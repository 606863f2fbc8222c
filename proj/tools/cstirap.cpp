// cstirap <subcommand> --config <file> [--out <file>] [--seed <u64>] [--threads <n>]
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cstirap/config.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kNumericalFailure = 2;

struct Options {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 1;
};

const char* describe(cstirap::ExperimentKind kind) {
  using cstirap::ExperimentKind;
  switch (kind) {
    case ExperimentKind::Simulate: return "Populations for one parameter set";
    case ExperimentKind::Scan: return "Populations along one swept parameter";
    case ExperimentKind::Contour: return "Populations on a two-parameter grid";
    case ExperimentKind::MonteCarlo: return "Mean infidelity under Gaussian phase noise";
    case ExperimentKind::Decay: return "Populations versus the decay rate of state 2";
    case ExperimentKind::Compensation: return "Rabi frequency needed to reach a target under decay";
    case ExperimentKind::Phases: return "Print the analytic phase table";
    case ExperimentKind::SolvePhases: return "Optimize composite phases numerically";
  }
  return "";
}

int run(cstirap::ExperimentKind kind, const Options& opts) {
  using namespace cstirap;

  std::ifstream file(opts.config);
  if (!file) {
    std::cerr << "error: cannot read config file " << opts.config << "\n";
    return kConfigError;
  }
  std::stringstream text;
  text << file.rdbuf();

  ParseResult parsed = parse_config(text.str(), kind);
  if (!parsed.ok()) {
    for (const auto& e : parsed.errors) std::cerr << "config error: " << e << "\n";
    return kConfigError;
  }
  RunConfig cfg = std::move(*parsed.config);
  if (!opts.out.empty()) cfg.output = opts.out;
  if (opts.seed_given) cfg.noise.seed = opts.seed;

  std::ofstream out_file;
  if (!cfg.output.empty()) {
    out_file.open(cfg.output, std::ios::binary);
    if (!out_file) {
      std::cerr << "error: cannot open output file " << cfg.output << "\n";
      return kConfigError;
    }
  }
  std::ostream& out = cfg.output.empty() ? std::cout : out_file;

  try {
    const RunStatus status = run_experiment(cfg, out, opts.threads);
    out.flush();
    if (!out) {
      std::cerr << "error: failed writing output\n";
      return kConfigError;
    }
    return status == RunStatus::Ok ? kOk : kNumericalFailure;
  } catch (const IntegrationError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Composite STIRAP simulations"};
  app.require_subcommand(1);

  Options opts;
  std::optional<cstirap::ExperimentKind> chosen;
  for (auto kind : {cstirap::ExperimentKind::Simulate, cstirap::ExperimentKind::Scan,
                    cstirap::ExperimentKind::Contour, cstirap::ExperimentKind::MonteCarlo,
                    cstirap::ExperimentKind::Decay, cstirap::ExperimentKind::Compensation,
                    cstirap::ExperimentKind::Phases, cstirap::ExperimentKind::SolvePhases}) {
    auto* sub = app.add_subcommand(cstirap::to_string(kind), describe(kind));
    sub->add_option("--config", opts.config, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out, "output file (default: stdout)");
    sub->add_option("--seed", opts.seed, "RNG seed, overrides the config")
        ->each([&opts](const std::string&) { opts.seed_given = true; });
    sub->add_option("--threads", opts.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->callback([&chosen, kind] { chosen = kind; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  return run(*chosen, opts);
}
