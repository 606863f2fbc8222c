#include "cstirap/phases.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cstirap/propalg.hpp"
#include "cstirap/simplex.hpp"

namespace cstirap {

namespace {

void require_odd(int n) {
  if (n < 1 || n % 2 == 0) {
    throw std::invalid_argument("N must be odd and positive, got " + std::to_string(n));
  }
}

int mod(int value, int m) { return ((value % m) + m) % m; }

CompositeSequence from_exact(ExactPhases exact, bool alternate) {
  CompositeSequence seq;
  seq.n_pairs = exact.denominator;
  seq.alternate_ordering = alternate;
  const double unit = std::numbers::pi / exact.denominator;
  for (int v : exact.pump) seq.pump_phases.push_back(unit * v);
  for (int v : exact.stokes) seq.stokes_phases.push_back(unit * v);
  seq.exact = std::move(exact);
  return seq;
}

}  // namespace

void CompositeSequence::validate() const {
  require_odd(n_pairs);
  const auto n = static_cast<std::size_t>(n_pairs);
  if (pump_phases.size() != n || stokes_phases.size() != n) {
    throw std::invalid_argument("phase lists must have N = " + std::to_string(n_pairs) +
                                " entries");
  }
  for (double v : pump_phases) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite pump phase");
  }
  for (double v : stokes_phases) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite stokes phase");
  }
}

CompositeSequence resonant_phases(int n) {
  require_odd(n);
  ExactPhases exact{n, {}, {}};
  for (int k = 1; k <= n; ++k) {
    const int m = (k - 1) / 2;
    exact.pump.push_back(mod(n * (k / 2) - m * (1 + m), 2 * n));
  }
  for (int k = 1; k <= n; ++k) exact.stokes.push_back(exact.pump[n - k]);
  return from_exact(std::move(exact), true);
}

CompositeSequence cap_phases(int n) {
  require_odd(n);
  ExactPhases exact{n, {}, std::vector<int>(n, 0)};
  for (int k = 1; k <= n; ++k) {
    exact.pump.push_back(mod((n + 1 - 2 * ((k + 1) / 2)) * (k / 2), 2 * n));
  }
  return from_exact(std::move(exact), false);
}

CompositeSequence phases_for(PhaseRegime regime, int n) {
  return regime == PhaseRegime::Resonant ? resonant_phases(n) : cap_phases(n);
}

CompositeSequence single_pair() { return resonant_phases(1); }

Propagator3 sequence_propagator(const PulsePair& pair, const SystemParams& sys,
                                const CompositeSequence& seq, double gap,
                                const IntegratorOptions& opts) {
  seq.validate();
  PulsePair base = pair;
  base.pump_phase = 0.0;
  base.stokes_phase = 0.0;
  base.reversed = false;
  const Propagator3 u = propagate(base, sys, opts);
  std::optional<Propagator3> gap_prop;
  if (gap > 0.0) gap_prop = free_propagator(sys, gap);
  return compose_sequence(u, seq.pump_phases, seq.stokes_phases, seq.alternate_ordering,
                          gap_prop);
}

double transfer_infidelity(const Propagator3& u) { return 1.0 - std::norm(u(2, 0)); }

PhaseSolution solve_phases(const PulsePair& pair, const SystemParams& sys,
                           const CompositeSequence& seed, const SolverOptions& opts) {
  seed.validate();
  if (sys.decay != 0.0) throw std::invalid_argument("phase solver requires zero decay");

  PulsePair base = pair;
  base.pump_phase = 0.0;
  base.stokes_phase = 0.0;
  base.reversed = false;
  const Propagator3 u = propagate(base, sys, opts.integrator);
  std::optional<Propagator3> gap_prop;
  if (opts.gap > 0.0) gap_prop = free_propagator(sys, opts.gap);

  const std::size_t n = static_cast<std::size_t>(seed.n_pairs);
  // Free variables: alpha_2..alpha_N, beta_2..beta_N.
  const auto unpack = [&](const std::vector<double>& x) {
    CompositeSequence s = seed;
    s.exact.reset();
    for (std::size_t k = 1; k < n; ++k) {
      s.pump_phases[k] = x[k - 1];
      s.stokes_phases[k] = x[n - 1 + k - 1];
    }
    return s;
  };
  const auto objective = [&](const std::vector<double>& x) {
    const CompositeSequence s = unpack(x);
    return transfer_infidelity(compose_sequence(u, s.pump_phases, s.stokes_phases,
                                                s.alternate_ordering, gap_prop));
  };

  std::vector<double> x0;
  for (std::size_t k = 1; k < n; ++k) x0.push_back(seed.pump_phases[k]);
  for (std::size_t k = 1; k < n; ++k) x0.push_back(seed.stokes_phases[k]);

  SimplexOptions so;
  so.max_iterations = opts.max_iterations;
  so.x_tolerance = opts.phase_tolerance;
  so.initial_step = opts.initial_step;
  const SimplexResult res = nelder_mead(objective, x0, so);

  PhaseSolution out;
  out.seed_infidelity = objective(x0);
  out.sequence = unpack(res.x);
  out.infidelity = res.value;
  out.iterations = res.iterations;
  out.converged = res.converged;
  // Gains below the integrator tolerance are not resolved; keep the seed then.
  if (out.seed_infidelity - out.infidelity <= opts.integrator.rtol) {
    out.sequence = seed;
    out.infidelity = out.seed_infidelity;
  }
  return out;
}

std::string format_phase_table(PhaseRegime regime, int n) {
  require_odd(n);
  const CompositeSequence seq = phases_for(regime, n);
  const ExactPhases& ex = *seq.exact;
  std::ostringstream out;
  if (n == 1) {
    out << "(" << ex.pump[0] << ", " << ex.stokes[0] << ")";
    return out.str();
  }
  out << "(";
  if (regime == PhaseRegime::Resonant) {
    for (int k = 0; k < n; ++k) {
      if (k > 0) out << "; ";
      out << ex.pump[k] << ", " << ex.stokes[k];
    }
    out << ")π/" << n;
  } else {
    // Far-off-resonant phases are even multiples of pi/N; print in units of 2pi/N.
    for (int k = 0; k < n; ++k) {
      if (k == 1 || k == n - 1) {
        out << ", ";
      } else if (k > 1) {
        out << ",";
      }
      out << ex.pump[k] / 2;
    }
    out << ")2π/" << n;
  }
  return out.str();
}

}  // namespace cstirap
