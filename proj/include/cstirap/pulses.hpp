#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

namespace cstirap {

// Units: hbar = 1, times in units of the pulse width T, frequencies in 1/T.

enum class PulseKind { Gaussian, SineSquared };

/// Real pulse envelope. `origin` is the center of a Gaussian and the start of
/// the support interval [origin, origin + width] of a sine-squared pulse.
struct PulseShape {
  PulseKind kind = PulseKind::SineSquared;
  double peak = 0.0;
  double width = 1.0;
  double origin = 0.0;

  void validate() const;
};

/// Gaussians are truncated at this many widths from their center.
inline constexpr double kGaussianCutoff = 5.0;

double envelope(const PulseShape& shape, double t);

/// Time at which the envelope reaches its peak.
double peak_time(const PulseShape& shape);

/// Interval outside of which the envelope is treated as zero.
std::pair<double, double> support(const PulseShape& shape);

/// tau = T for Gaussians, tau = T/pi for sine-squared pulses.
double default_delay(PulseKind kind, double width = 1.0);

/// A pump/Stokes pair. The shapes hold the counterintuitive (Stokes first)
/// placement; `reversed` swaps the time positions of the two envelopes while
/// leaving the phases attached to their fields.
struct PulsePair {
  PulseShape pump;
  PulseShape stokes;
  double delay = 0.0;
  double pump_phase = 0.0;
  double stokes_phase = 0.0;
  bool reversed = false;

  void validate() const;
};

/// Builds a pair with identical pump and Stokes shapes placed as
///   Gaussian:     Stokes centered at -delay/2, pump at +delay/2
///   SineSquared:  Stokes on [0, T], pump on [delay, T + delay].
PulsePair make_pulse_pair(PulseKind kind, double peak, double width, double delay,
                          double pump_phase = 0.0, double stokes_phase = 0.0,
                          bool reversed = false);

/// Same, with the default delay for the shape.
PulsePair make_pulse_pair(PulseKind kind, double peak, double width = 1.0);

/// Complex Rabi frequencies (Omega_p e^{i alpha}, Omega_s e^{i beta}) at t.
std::pair<std::complex<double>, std::complex<double>> pair_envelopes(const PulsePair& pair,
                                                                     double t);

/// Time window covering both envelopes' supports.
std::pair<double, double> pair_window(const PulsePair& pair);

/// Support boundaries and other points where the field is not smooth.
std::vector<double> pair_breakpoints(const PulsePair& pair);

/// Pulse pairs placed one after another along a common time axis. Each pair
/// contributes only inside its own window.
class PulseTrain {
 public:
  struct Slot {
    PulsePair pair;
    double offset;  // pair-local time t maps to train time t + offset
  };

  PulseTrain() = default;

  /// Back-to-back copies of `base` with per-pair phases. Even-numbered pairs
  /// (k = 2, 4, ...) are reversed when `alternate` is set. `gap` separates
  /// consecutive windows.
  static PulseTrain back_to_back(const PulsePair& base, std::span<const double> pump_phases,
                                 std::span<const double> stokes_phases, bool alternate,
                                 double gap = 0.0);

  void append(const PulsePair& pair, double gap = 0.0);

  std::pair<std::complex<double>, std::complex<double>> envelopes(double t) const;
  std::pair<double, double> window() const;
  std::vector<double> breakpoints() const;

  const std::vector<Slot>& slots() const { return slots_; }
  bool empty() const { return slots_.empty(); }

 private:
  std::vector<Slot> slots_;
};

}  // namespace cstirap
