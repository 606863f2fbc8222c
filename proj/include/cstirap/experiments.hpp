#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cstirap/dynamics.hpp"
#include "cstirap/ode.hpp"
#include "cstirap/phases.hpp"
#include "cstirap/pulses.hpp"

namespace cstirap {

/// Pulse pair parameters before placement. An unset delay resolves to
/// default_delay(kind, width).
struct PulseTemplate {
  PulseKind kind = PulseKind::SineSquared;
  double peak = 30.0;
  double width = 1.0;
  std::optional<double> delay;

  double resolved_delay() const;
  PulsePair build() const;
  bool operator==(const PulseTemplate&) const = default;
};

enum class SequenceSource { Single, Resonant, Cap, Explicit };

struct SequenceSpec {
  SequenceSource source = SequenceSource::Single;
  int n = 1;
  std::vector<double> pump_phases;    // explicit source only
  std::vector<double> stokes_phases;  // explicit source only
  std::optional<bool> alternate;      // overrides the source's ordering
  double gap = 0.0;                   // field-free time between pair windows

  /// Resonant phases alternate and far-off-resonant phases keep a fixed order
  /// unless `alternate` says otherwise. Explicit phases fall back to
  /// default_alternation(detuning) and throw if that is undecided.
  CompositeSequence build(double detuning) const;
  void validate() const;
  bool operator==(const SequenceSpec&) const = default;
};

enum class Parameter { Peak, Delay, Detuning, Decay };
enum class Spacing { Linear, Log };

std::string to_string(Parameter p);
std::optional<Parameter> parse_parameter(const std::string& name);

struct Axis {
  Parameter parameter = Parameter::Peak;
  double min = 0.0;
  double max = 1.0;
  int points = 2;
  Spacing spacing = Spacing::Linear;

  std::vector<double> values() const;
  void validate() const;
  bool operator==(const Axis&) const = default;
};

struct ScanSpec {
  std::vector<Axis> axes;  // first axis varies slowest
  PulseTemplate pulse;
  SystemParams system;
  SequenceSpec sequence;
  IntegratorOptions integrator;

  void validate() const;
  std::size_t size() const;
  std::vector<double> coordinates(std::size_t index) const;
  /// Template and system with the swept values of grid point `index` applied.
  std::pair<PulseTemplate, SystemParams> point(std::size_t index) const;
  bool operator==(const ScanSpec&) const = default;
};

struct FidelityResult {
  std::vector<double> coords;
  double p1 = 0.0;
  double p2 = 0.0;
  double p3 = 0.0;
  double infidelity = 1.0;
  double norm_loss = 0.0;
  double infidelity_sem = 0.0;  // Monte Carlo standard error, 0 otherwise
  std::string error;            // nonempty when the point failed

  bool ok() const { return error.empty(); }
};

/// Populations after the sequence acting on |1>.
FidelityResult evaluate_point(const PulseTemplate& pulse, const SystemParams& sys,
                              const SequenceSpec& sequence, const IntegratorOptions& opts);

/// One result per grid point, in grid order. Integration failures are recorded
/// per point. Results do not depend on `threads`.
std::vector<FidelityResult> run_scan(const ScanSpec& spec, int threads = 1);

struct NoiseSpec {
  double sigma = 0.01;
  int samples = 1000;
  std::uint64_t seed = 1;

  bool operator==(const NoiseSpec&) const = default;
};

/// Gaussian noise of width sigma is added to every alpha_k and beta_k
/// independently. Each sample draws from a generator keyed on
/// (seed, grid index, sample index). Reports means over samples.
std::vector<FidelityResult> monte_carlo_phase_noise(const ScanSpec& spec, const NoiseSpec& noise,
                                                    int threads = 1);

struct DecayPoint {
  double gamma = 0.0;
  FidelityResult single;
  FidelityResult composite;
};

/// Infidelity versus decay rate for a single pair and for `spec.sequence`.
DecayPoint evaluate_decay_point(const ScanSpec& spec, double gamma);
std::vector<DecayPoint> decay_scan(const ScanSpec& spec, std::span<const double> gammas,
                                   int threads = 1);

struct CompensationSpec {
  std::vector<double> gammas{0.1, 0.2, 0.5, 1.0};
  double threshold = 1e-3;
  double peak_min = 2.0;
  double peak_max = 400.0;
  double peak_step = 2.0;
  double resolution = 1e-2;

  void validate() const;
  bool operator==(const CompensationSpec&) const = default;
};

struct CompensationRow {
  double gamma = 0.0;
  std::optional<double> required_peak;
  std::string note;
};

struct CompensationResult {
  std::vector<CompensationRow> rows;
  std::optional<double> exponent;  // slope of log(peak) versus log(gamma)
};

/// Smallest peak Rabi frequency on the coarse grid [peak_min, peak_max] at which
/// the infidelity reaches the threshold, refined by bisection against the
/// preceding grid point.
std::optional<double> required_peak(const ScanSpec& spec, double gamma,
                                    const CompensationSpec& comp);

CompensationResult decay_compensation_check(const ScanSpec& spec, const CompensationSpec& comp,
                                            int threads = 1);

/// Least-squares slope of log(y) against log(x).
double fit_log_slope(std::span<const double> x, std::span<const double> y);

}  // namespace cstirap
