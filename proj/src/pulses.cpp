#include "cstirap/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cstirap {

void PulseShape::validate() const {
  if (!(peak >= 0.0) || !std::isfinite(peak)) {
    throw std::invalid_argument("pulse peak must be finite and >= 0, got " + std::to_string(peak));
  }
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw std::invalid_argument("pulse width must be finite and > 0, got " +
                                std::to_string(width));
  }
  if (!std::isfinite(origin)) throw std::invalid_argument("pulse origin must be finite");
}

double envelope(const PulseShape& shape, double t) {
  switch (shape.kind) {
    case PulseKind::Gaussian: {
      const double x = (t - shape.origin) / shape.width;
      return shape.peak * std::exp(-x * x);
    }
    case PulseKind::SineSquared: {
      if (t < shape.origin || t > shape.origin + shape.width) return 0.0;
      const double s = std::sin(std::numbers::pi * (t - shape.origin) / shape.width);
      return shape.peak * s * s;
    }
  }
  return 0.0;
}

double peak_time(const PulseShape& shape) {
  return shape.kind == PulseKind::Gaussian ? shape.origin : shape.origin + 0.5 * shape.width;
}

std::pair<double, double> support(const PulseShape& shape) {
  if (shape.kind == PulseKind::Gaussian) {
    return {shape.origin - kGaussianCutoff * shape.width,
            shape.origin + kGaussianCutoff * shape.width};
  }
  return {shape.origin, shape.origin + shape.width};
}

double default_delay(PulseKind kind, double width) {
  return kind == PulseKind::Gaussian ? width : width / std::numbers::pi;
}

void PulsePair::validate() const {
  pump.validate();
  stokes.validate();
  if (!(delay > 0.0) || !std::isfinite(delay)) {
    throw std::invalid_argument("pulse delay must be finite and > 0, got " +
                                std::to_string(delay));
  }
  if (!std::isfinite(pump_phase) || !std::isfinite(stokes_phase)) {
    throw std::invalid_argument("pulse phases must be finite");
  }
}

PulsePair make_pulse_pair(PulseKind kind, double peak, double width, double delay,
                          double pump_phase, double stokes_phase, bool reversed) {
  PulsePair pair;
  pair.pump = {kind, peak, width, 0.0};
  pair.stokes = {kind, peak, width, 0.0};
  if (kind == PulseKind::Gaussian) {
    pair.stokes.origin = -0.5 * delay;
    pair.pump.origin = 0.5 * delay;
  } else {
    pair.stokes.origin = 0.0;
    pair.pump.origin = delay;
  }
  pair.delay = delay;
  pair.pump_phase = pump_phase;
  pair.stokes_phase = stokes_phase;
  pair.reversed = reversed;
  pair.validate();
  return pair;
}

PulsePair make_pulse_pair(PulseKind kind, double peak, double width) {
  return make_pulse_pair(kind, peak, width, default_delay(kind, width));
}

namespace {

// Shapes as they sit on the time axis once `reversed` is taken into account.
std::pair<PulseShape, PulseShape> placed_shapes(const PulsePair& pair) {
  if (!pair.reversed) return {pair.pump, pair.stokes};
  PulseShape pump = pair.pump;
  PulseShape stokes = pair.stokes;
  pump.origin = pair.stokes.origin;
  stokes.origin = pair.pump.origin;
  return {pump, stokes};
}

}  // namespace

std::pair<std::complex<double>, std::complex<double>> pair_envelopes(const PulsePair& pair,
                                                                     double t) {
  const auto [pump, stokes] = placed_shapes(pair);
  return {std::polar(envelope(pump, t), pair.pump_phase),
          std::polar(envelope(stokes, t), pair.stokes_phase)};
}

std::pair<double, double> pair_window(const PulsePair& pair) {
  const auto [p0, p1] = support(pair.pump);
  const auto [s0, s1] = support(pair.stokes);
  return {std::min(p0, s0), std::max(p1, s1)};
}

std::vector<double> pair_breakpoints(const PulsePair& pair) {
  const auto [p0, p1] = support(pair.pump);
  const auto [s0, s1] = support(pair.stokes);
  std::vector<double> points{p0, p1, s0, s1};
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

PulseTrain PulseTrain::back_to_back(const PulsePair& base, std::span<const double> pump_phases,
                                    std::span<const double> stokes_phases, bool alternate,
                                    double gap) {
  if (pump_phases.size() != stokes_phases.size()) {
    throw std::invalid_argument("pump and stokes phase lists differ in length");
  }
  PulseTrain train;
  for (std::size_t k = 0; k < pump_phases.size(); ++k) {
    PulsePair pair = base;
    pair.pump_phase = pump_phases[k];
    pair.stokes_phase = stokes_phases[k];
    pair.reversed = alternate && (k % 2 == 1);
    train.append(pair, k == 0 ? 0.0 : gap);
  }
  return train;
}

void PulseTrain::append(const PulsePair& pair, double gap) {
  if (gap < 0.0) throw std::invalid_argument("inter-pair gap must be >= 0");
  pair.validate();
  double offset = 0.0;
  if (!slots_.empty()) offset = window().second + gap - pair_window(pair).first;
  slots_.push_back({pair, offset});
}

std::pair<std::complex<double>, std::complex<double>> PulseTrain::envelopes(double t) const {
  std::complex<double> pump{}, stokes{};
  for (const auto& slot : slots_) {
    const double local = t - slot.offset;
    const auto [w0, w1] = pair_window(slot.pair);
    if (local < w0 || local > w1) continue;
    const auto [p, s] = pair_envelopes(slot.pair, local);
    pump += p;
    stokes += s;
  }
  return {pump, stokes};
}

std::pair<double, double> PulseTrain::window() const {
  if (slots_.empty()) return {0.0, 0.0};
  const auto first = pair_window(slots_.front().pair);
  const auto last = pair_window(slots_.back().pair);
  return {first.first + slots_.front().offset, last.second + slots_.back().offset};
}

std::vector<double> PulseTrain::breakpoints() const {
  std::vector<double> points;
  for (const auto& slot : slots_) {
    for (double b : pair_breakpoints(slot.pair)) points.push_back(b + slot.offset);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

}  // namespace cstirap
