#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cstirap/experiments.hpp"
#include "cstirap/phases.hpp"

namespace cstirap {

enum class ExperimentKind {
  Simulate,
  Scan,
  Contour,
  MonteCarlo,
  Decay,
  Compensation,
  Phases,
  SolvePhases,
};

std::string to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_experiment(const std::string& name);

struct RunConfig {
  ExperimentKind experiment = ExperimentKind::Simulate;
  ScanSpec scan;
  NoiseSpec noise;
  CompensationSpec compensation;
  SolverOptions solver;
  PhaseRegime regime = PhaseRegime::Resonant;  // phases experiment
  std::string output;                           // empty: standard output

  bool operator==(const RunConfig&) const = default;
};

struct ParseResult {
  std::optional<RunConfig> config;
  std::vector<std::string> errors;  // "key.path: message"

  bool ok() const { return config.has_value(); }
};

/// Parses and validates a JSON run configuration. All violations are reported,
/// each prefixed with its key path. When `expected` is given, a missing
/// "experiment" key takes that value and a conflicting one is an error.
ParseResult parse_config(const std::string& text,
                         std::optional<ExperimentKind> expected = std::nullopt);

/// Canonical JSON with every field explicit; parse_config inverts it.
std::string serialize_config(const RunConfig& config);

/// FNV-1a 64 of the canonical serialization, as 16 hex digits.
std::string config_hash(const RunConfig& config);

/// "%.17g"
std::string format_real(double value);

/// CSV: swept parameters, P1, P2, P3, infidelity, norm_loss (and
/// infidelity_sem when `with_sem`). Failed points carry nan and a comment
/// line. The last line is "# config_hash=<hex>".
void write_table(std::ostream& out, const std::vector<std::string>& axis_names,
                 const std::vector<FidelityResult>& results, const std::string& hash,
                 bool with_sem = false);

/// write_table to `path`; throws std::runtime_error if it cannot be written.
void emit_table(const std::string& path, const std::vector<std::string>& axis_names,
                const std::vector<FidelityResult>& results, const std::string& hash,
                bool with_sem = false);

void write_compensation(std::ostream& out, const CompensationResult& result,
                        const std::string& hash);
void write_phase_solution(std::ostream& out, const PhaseSolution& solution,
                          const std::string& hash);

enum class RunStatus { Ok, NumericalFailure };

/// Runs the configured experiment and writes its output; config_hash(config)
/// goes into the trailing comment. NumericalFailure means some grid points
/// (or decay rates) produced no result; their rows are still written.
RunStatus run_experiment(const RunConfig& config, std::ostream& out, int threads = 1);

/// Phase table in the notation of integer multiples of pi/N or 2pi/N.
std::string print_phases(int n, PhaseRegime regime);

}  // namespace cstirap
