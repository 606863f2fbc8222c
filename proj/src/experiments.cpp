#include "cstirap/experiments.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "cstirap/propalg.hpp"
#include "parallel.hpp"

namespace cstirap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t grid, std::uint64_t sample) {
  return splitmix64(splitmix64(splitmix64(seed) ^ grid) ^ sample);
}

FidelityResult failed(std::vector<double> coords, const std::string& what) {
  FidelityResult r;
  r.coords = std::move(coords);
  r.p1 = r.p2 = r.p3 = r.infidelity = r.norm_loss = kNaN;
  r.error = what;
  return r;
}

FidelityResult populations(const Propagator3& u) {
  FidelityResult r;
  r.p1 = std::norm(u(0, 0));
  r.p2 = std::norm(u(1, 0));
  r.p3 = std::norm(u(2, 0));
  r.infidelity = 1.0 - r.p3;
  r.norm_loss = 1.0 - (r.p1 + r.p2 + r.p3);
  return r;
}

Propagator3 zero_phase_propagator(const PulseTemplate& pulse, const SystemParams& sys,
                                  const IntegratorOptions& opts) {
  return propagate(pulse.build(), sys, opts);
}

std::optional<Propagator3> gap_propagator(const SystemParams& sys, double gap) {
  if (gap <= 0.0) return std::nullopt;
  return free_propagator(sys, gap);
}

}  // namespace

double PulseTemplate::resolved_delay() const {
  return delay ? *delay : default_delay(kind, width);
}

PulsePair PulseTemplate::build() const {
  return make_pulse_pair(kind, peak, width, resolved_delay());
}

CompositeSequence SequenceSpec::build(double detuning) const {
  CompositeSequence seq;
  switch (source) {
    case SequenceSource::Single:
      seq = single_pair();
      break;
    case SequenceSource::Resonant:
      seq = resonant_phases(n);
      break;
    case SequenceSource::Cap:
      seq = cap_phases(n);
      break;
    case SequenceSource::Explicit: {
      seq.n_pairs = n;
      seq.pump_phases = pump_phases;
      seq.stokes_phases = stokes_phases;
      const auto order = alternate ? alternate : default_alternation(detuning);
      if (!order) {
        throw std::invalid_argument(
            "pair ordering is undecided for 0 < |detuning| < 1; set sequence.alternate");
      }
      seq.alternate_ordering = *order;
      break;
    }
  }
  if (alternate) seq.alternate_ordering = *alternate;
  seq.validate();
  return seq;
}

void SequenceSpec::validate() const {
  if (n < 1 || n % 2 == 0) {
    throw std::invalid_argument("N must be odd, got " + std::to_string(n));
  }
  if (source == SequenceSource::Single && n != 1) {
    throw std::invalid_argument("single-pair sequence needs N = 1");
  }
  if (source == SequenceSource::Explicit) {
    if (pump_phases.size() != static_cast<std::size_t>(n) ||
        stokes_phases.size() != static_cast<std::size_t>(n)) {
      throw std::invalid_argument("explicit phases need N entries each");
    }
  }
  if (!(gap >= 0.0) || !std::isfinite(gap)) throw std::invalid_argument("gap must be >= 0");
}

std::string to_string(Parameter p) {
  switch (p) {
    case Parameter::Peak:
      return "peak";
    case Parameter::Delay:
      return "delay";
    case Parameter::Detuning:
      return "detuning";
    case Parameter::Decay:
      return "decay";
  }
  return "?";
}

std::optional<Parameter> parse_parameter(const std::string& name) {
  for (Parameter p : {Parameter::Peak, Parameter::Delay, Parameter::Detuning, Parameter::Decay}) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

std::vector<double> Axis::values() const {
  validate();
  std::vector<double> v(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / (points - 1);
    v[i] = spacing == Spacing::Linear ? min + f * (max - min)
                                      : std::exp(std::log(min) + f * (std::log(max) - std::log(min)));
  }
  v.front() = min;
  v.back() = max;
  return v;
}

void Axis::validate() const {
  const std::string name = to_string(parameter);
  if (points < 2) throw std::invalid_argument(name + " axis needs at least 2 points");
  if (!(min < max)) throw std::invalid_argument(name + " axis needs min < max");
  if (spacing == Spacing::Log && !(min > 0.0)) {
    throw std::invalid_argument(name + " axis with log spacing needs min > 0");
  }
  if ((parameter == Parameter::Peak || parameter == Parameter::Decay) && min < 0.0) {
    throw std::invalid_argument(name + " axis must be non-negative");
  }
  if (parameter == Parameter::Delay && !(min > 0.0)) {
    throw std::invalid_argument("delay axis must be positive");
  }
}

void ScanSpec::validate() const {
  for (const auto& a : axes) a.validate();
  PulseTemplate probe = pulse;
  probe.build();
  system.validate();
  sequence.validate();
}

std::size_t ScanSpec::size() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= static_cast<std::size_t>(a.points);
  return n;
}

std::vector<double> ScanSpec::coordinates(std::size_t index) const {
  std::vector<double> c(axes.size());
  for (std::size_t k = axes.size(); k-- > 0;) {
    const auto pts = static_cast<std::size_t>(axes[k].points);
    c[k] = axes[k].values()[index % pts];
    index /= pts;
  }
  return c;
}

std::pair<PulseTemplate, SystemParams> ScanSpec::point(std::size_t index) const {
  PulseTemplate p = pulse;
  SystemParams s = system;
  const auto c = coordinates(index);
  for (std::size_t k = 0; k < axes.size(); ++k) {
    switch (axes[k].parameter) {
      case Parameter::Peak:
        p.peak = c[k];
        break;
      case Parameter::Delay:
        p.delay = c[k];
        break;
      case Parameter::Detuning:
        s.detuning = c[k];
        break;
      case Parameter::Decay:
        s.decay = c[k];
        break;
    }
  }
  return {p, s};
}

FidelityResult evaluate_point(const PulseTemplate& pulse, const SystemParams& sys,
                              const SequenceSpec& sequence, const IntegratorOptions& opts) {
  const CompositeSequence seq = sequence.build(sys.detuning);
  const Propagator3 u = compose_sequence(zero_phase_propagator(pulse, sys, opts), seq.pump_phases,
                                         seq.stokes_phases, seq.alternate_ordering,
                                         gap_propagator(sys, sequence.gap));
  return populations(u);
}

std::vector<FidelityResult> run_scan(const ScanSpec& spec, int threads) {
  spec.validate();
  std::vector<FidelityResult> out(spec.size());
  detail::parallel_for(out.size(), threads, [&](std::size_t i) {
    auto coords = spec.coordinates(i);
    try {
      const auto [pulse, sys] = spec.point(i);
      out[i] = evaluate_point(pulse, sys, spec.sequence, spec.integrator);
      out[i].coords = std::move(coords);
    } catch (const IntegrationError& e) {
      out[i] = failed(std::move(coords), e.what());
    }
  });
  return out;
}

std::vector<FidelityResult> monte_carlo_phase_noise(const ScanSpec& spec, const NoiseSpec& noise,
                                                    int threads) {
  spec.validate();
  if (!(noise.sigma >= 0.0)) throw std::invalid_argument("noise sigma must be >= 0");
  if (noise.samples < 1) throw std::invalid_argument("Monte Carlo needs at least 1 sample");

  std::vector<FidelityResult> out(spec.size());
  detail::parallel_for(out.size(), threads, [&](std::size_t i) {
    auto coords = spec.coordinates(i);
    try {
      const auto [pulse, sys] = spec.point(i);
      const CompositeSequence seq = spec.sequence.build(sys.detuning);
      const Propagator3 u = zero_phase_propagator(pulse, sys, spec.integrator);
      const auto gap = gap_propagator(sys, spec.sequence.gap);

      FidelityResult acc;
      double sum_sq = 0.0;
      std::vector<double> alpha(seq.pump_phases.size()), beta(seq.stokes_phases.size());
      for (int s = 0; s < noise.samples; ++s) {
        std::mt19937_64 gen(stream_key(noise.seed, i, static_cast<std::uint64_t>(s)));
        std::normal_distribution<double> dist(0.0, 1.0);
        for (std::size_t k = 0; k < alpha.size(); ++k) {
          alpha[k] = seq.pump_phases[k] + noise.sigma * dist(gen);
          beta[k] = seq.stokes_phases[k] + noise.sigma * dist(gen);
        }
        const FidelityResult r =
            populations(compose_sequence(u, alpha, beta, seq.alternate_ordering, gap));
        acc.p1 += r.p1;
        acc.p2 += r.p2;
        acc.p3 += r.p3;
        acc.norm_loss += r.norm_loss;
        sum_sq += r.infidelity * r.infidelity;
      }
      const double m = noise.samples;
      acc.p1 /= m;
      acc.p2 /= m;
      acc.p3 /= m;
      acc.norm_loss /= m;
      acc.infidelity = 1.0 - acc.p3;
      if (noise.samples > 1) {
        const double mean = acc.infidelity;
        const double var = std::max(0.0, (sum_sq - m * mean * mean) / (m - 1.0));
        acc.infidelity_sem = std::sqrt(var / m);
      }
      acc.coords = std::move(coords);
      out[i] = std::move(acc);
    } catch (const IntegrationError& e) {
      out[i] = failed(std::move(coords), e.what());
    }
  });
  return out;
}

DecayPoint evaluate_decay_point(const ScanSpec& spec, double gamma) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("decay rate must be >= 0");
  SystemParams sys = spec.system;
  sys.decay = gamma;
  DecayPoint point;
  point.gamma = gamma;
  try {
    // Both curves come from the same pair propagator.
    const Propagator3 u = zero_phase_propagator(spec.pulse, sys, spec.integrator);
    const CompositeSequence seq = spec.sequence.build(sys.detuning);
    point.single = populations(u);
    point.composite =
        populations(compose_sequence(u, seq.pump_phases, seq.stokes_phases,
                                     seq.alternate_ordering, gap_propagator(sys, spec.sequence.gap)));
  } catch (const IntegrationError& e) {
    point.single = failed({gamma}, e.what());
    point.composite = failed({gamma}, e.what());
  }
  point.single.coords = {gamma};
  point.composite.coords = {gamma};
  return point;
}

std::vector<DecayPoint> decay_scan(const ScanSpec& spec, std::span<const double> gammas,
                                   int threads) {
  spec.validate();
  std::vector<DecayPoint> out(gammas.size());
  detail::parallel_for(out.size(), threads,
                       [&](std::size_t i) { out[i] = evaluate_decay_point(spec, gammas[i]); });
  return out;
}

void CompensationSpec::validate() const {
  if (gammas.empty()) throw std::invalid_argument("compensation needs at least one decay rate");
  for (double g : gammas) {
    if (!(g >= 0.0)) throw std::invalid_argument("decay rates must be >= 0");
  }
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("infidelity threshold must lie in (0, 1)");
  }
  if (!(peak_min >= 0.0 && peak_min < peak_max)) {
    throw std::invalid_argument("compensation needs 0 <= peak_min < peak_max");
  }
  if (!(peak_step > 0.0) || !(resolution > 0.0)) {
    throw std::invalid_argument("compensation step and resolution must be > 0");
  }
}

std::optional<double> required_peak(const ScanSpec& spec, double gamma,
                                    const CompensationSpec& comp) {
  SystemParams sys = spec.system;
  sys.decay = gamma;
  const auto infidelity_at = [&](double peak) {
    PulseTemplate p = spec.pulse;
    p.peak = peak;
    return evaluate_point(p, sys, spec.sequence, spec.integrator).infidelity;
  };
  double prev = comp.peak_min;
  if (infidelity_at(prev) <= comp.threshold) return prev;
  const auto steps = static_cast<long>(std::ceil((comp.peak_max - comp.peak_min) / comp.peak_step));
  for (long s = 1; s <= steps; ++s) {
    const double peak = std::min(comp.peak_min + s * comp.peak_step, comp.peak_max);
    if (infidelity_at(peak) <= comp.threshold) {
      double lo = prev;
      double hi = peak;
      while (hi - lo > comp.resolution) {
        const double mid = 0.5 * (lo + hi);
        (infidelity_at(mid) <= comp.threshold ? hi : lo) = mid;
      }
      return hi;
    }
    prev = peak;
  }
  return std::nullopt;
}

CompensationResult decay_compensation_check(const ScanSpec& spec, const CompensationSpec& comp,
                                            int threads) {
  spec.validate();
  comp.validate();
  CompensationResult result;
  result.rows.resize(comp.gammas.size());
  detail::parallel_for(result.rows.size(), threads, [&](std::size_t i) {
    CompensationRow& row = result.rows[i];
    row.gamma = comp.gammas[i];
    try {
      row.required_peak = required_peak(spec, row.gamma, comp);
      if (!row.required_peak) row.note = "threshold not reached below peak_max";
    } catch (const IntegrationError& e) {
      row.note = e.what();
    }
  });
  std::vector<double> x, y;
  for (const auto& row : result.rows) {
    if (row.gamma > 0.0 && row.required_peak && *row.required_peak > 0.0) {
      x.push_back(row.gamma);
      y.push_back(*row.required_peak);
    }
  }
  if (x.size() >= 2) result.exponent = fit_log_slope(x, y);
  return result;
}

double fit_log_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("slope fit needs at least two matching points");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("slope fit needs distinct x values");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace cstirap
