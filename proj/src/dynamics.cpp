#include "cstirap/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace cstirap {

namespace {

constexpr Complex kI{0.0, 1.0};

// Interior breakpoints sorted, with near-duplicates dropped.
std::vector<double> segment_points(double t_i, double t_f, std::span<const double> breaks) {
  std::vector<double> points{t_i};
  std::vector<double> sorted(breaks.begin(), breaks.end());
  std::sort(sorted.begin(), sorted.end());
  const double min_len = 1e-12 * std::max(1.0, t_f - t_i);
  for (double b : sorted) {
    if (b - points.back() > min_len && t_f - b > min_len) points.push_back(b);
  }
  points.push_back(t_f);
  return points;
}

template <class M>
M integrate_segments(const std::function<M(double)>& h, double t_i, double t_f,
                     const IntegratorOptions& opts, std::span<const double> breaks,
                     const std::function<void(double, const M&)>& observer) {
  DormandPrince45<M> solver(opts);
  const auto rhs = [&h](double t, const M& u) -> M { return -kI * (h(t) * u); };
  const auto points = segment_points(t_i, t_f, breaks);
  M u = M::Identity();
  for (std::size_t s = 0; s + 1 < points.size(); ++s) {
    u = solver.integrate(rhs, u, points[s], points[s + 1], observer);
  }
  return u;
}

using EnvelopeFn = std::function<std::pair<Complex, Complex>(double)>;

// Integrates in the frame rotating with diag(0, detuning, 0), whose free
// evolution is exact; field-free stretches then cost no accuracy.
Propagator3 propagate_rotating(const EnvelopeFn& env, const SystemParams& sys, double t_i,
                               double t_f, const IntegratorOptions& opts,
                               std::span<const double> breaks) {
  const double d = sys.detuning;
  const std::function<Matrix3(double)> h = [&](double t) -> Matrix3 {
    const auto [p, s] = env(t);
    const Complex w = std::exp(-kI * (d * (t - t_i)));
    Matrix3 m = Matrix3::Zero();
    m(0, 1) = 0.5 * p * w;
    m(1, 0) = 0.5 * std::conj(p * w);
    m(1, 2) = 0.5 * s * std::conj(w);
    m(2, 1) = 0.5 * std::conj(s) * w;
    m(1, 1) = Complex{0.0, -0.5 * sys.decay};
    return m;
  };
  Propagator3 u = integrate_segments<Matrix3>(h, t_i, t_f, opts, breaks, {});
  u.row(1) *= std::exp(-kI * (d * (t_f - t_i)));
  return u;
}

void require_resonant_real(const PulsePair& pair, const SystemParams& sys) {
  if (sys.detuning != 0.0 || sys.decay != 0.0) {
    throw std::invalid_argument(
        "two-state mapping requires zero detuning and zero decay");
  }
  if (pair.pump_phase != 0.0 || pair.stokes_phase != 0.0) {
    throw std::invalid_argument("two-state mapping requires real (zero-phase) envelopes");
  }
}

}  // namespace

void SystemParams::validate() const {
  if (!std::isfinite(detuning)) throw std::invalid_argument("detuning must be finite");
  if (!(decay >= 0.0) || !std::isfinite(decay)) {
    throw std::invalid_argument("decay must be finite and >= 0, got " + std::to_string(decay));
  }
}

Matrix3 hamiltonian(Complex pump, Complex stokes, const SystemParams& sys) {
  Matrix3 h = Matrix3::Zero();
  h(0, 1) = 0.5 * pump;
  h(1, 0) = 0.5 * std::conj(pump);
  h(1, 2) = 0.5 * stokes;
  h(2, 1) = 0.5 * std::conj(stokes);
  h(1, 1) = Complex{sys.detuning, -0.5 * sys.decay};
  return h;
}

Matrix3 hamiltonian(const PulsePair& pair, const SystemParams& sys, double t) {
  const auto [p, s] = pair_envelopes(pair, t);
  return hamiltonian(p, s, sys);
}

Matrix3 hamiltonian(const PulseTrain& train, const SystemParams& sys, double t) {
  const auto [p, s] = train.envelopes(t);
  return hamiltonian(p, s, sys);
}

Propagator3 propagate(const HamiltonianFn& h, double t_i, double t_f,
                      const IntegratorOptions& opts, std::span<const double> breakpoints,
                      const TrajectoryObserver& observer) {
  return integrate_segments<Matrix3>(h, t_i, t_f, opts, breakpoints, observer);
}

Propagator3 propagate(const PulsePair& pair, const SystemParams& sys,
                      const IntegratorOptions& opts) {
  const auto [t0, t1] = pair_window(pair);
  return propagate(pair, sys, t0, t1, opts);
}

Propagator3 propagate(const PulsePair& pair, const SystemParams& sys, double t_i, double t_f,
                      const IntegratorOptions& opts) {
  pair.validate();
  sys.validate();
  if (!(t_f > t_i)) throw std::invalid_argument("propagation needs t_f > t_i");
  const auto breaks = pair_breakpoints(pair);
  return propagate_rotating([&](double t) { return pair_envelopes(pair, t); }, sys, t_i, t_f, opts,
                            breaks);
}

Propagator3 propagate(const PulseTrain& train, const SystemParams& sys,
                      const IntegratorOptions& opts) {
  if (train.empty()) throw std::invalid_argument("empty pulse train");
  sys.validate();
  const auto [t0, t1] = train.window();
  const auto breaks = train.breakpoints();
  return propagate_rotating([&](double t) { return train.envelopes(t); }, sys, t0, t1, opts, breaks);
}

StateVector propagate_state(const StateVector& initial, const PulsePair& pair,
                            const SystemParams& sys, const IntegratorOptions& opts) {
  return propagate(pair, sys, opts) * initial;
}

StateVector propagate_state(const StateVector& initial, const PulseTrain& train,
                            const SystemParams& sys, const IntegratorOptions& opts) {
  return propagate(train, sys, opts) * initial;
}

Propagator3 free_propagator(const SystemParams& sys, double duration) {
  Propagator3 u = Propagator3::Identity();
  u(1, 1) = std::exp(-kI * Complex{sys.detuning, -0.5 * sys.decay} * duration);
  return u;
}

Eigen::Matrix2d resonant_two_state_hamiltonian(const PulsePair& pair, const SystemParams& sys,
                                               double t) {
  require_resonant_real(pair, sys);
  const auto [p, s] = pair_envelopes(pair, t);
  Eigen::Matrix2d h;
  h << -s.real(), p.real(), p.real(), s.real();
  return 0.25 * h;
}

Matrix2 propagate_two_state(const PulsePair& pair, const SystemParams& sys,
                            const IntegratorOptions& opts) {
  require_resonant_real(pair, sys);
  const auto [t0, t1] = pair_window(pair);
  const auto breaks = pair_breakpoints(pair);
  const std::function<Matrix2(double)> h = [&](double t) -> Matrix2 {
    return resonant_two_state_hamiltonian(pair, sys, t).cast<Complex>();
  };
  return integrate_segments<Matrix2>(h, t0, t1, opts, breaks, {});
}

EffectiveCoupling effective_two_state(const PulsePair& pair, const SystemParams& sys, double t) {
  if (sys.detuning == 0.0) {
    throw std::invalid_argument("adiabatic elimination requires nonzero detuning");
  }
  if (sys.decay != 0.0) {
    throw std::invalid_argument("adiabatic elimination is only provided for zero decay");
  }
  const auto [p, s] = pair_envelopes(pair, t);
  const double two_delta = 2.0 * sys.detuning;
  const double peak = std::max(pair.pump.peak, pair.stokes.peak);
  return {-p * s / two_delta, (std::norm(p) - std::norm(s)) / two_delta,
          -(std::norm(p) + std::norm(s)) / (4.0 * two_delta),
          std::abs(sys.detuning) >= 10.0 * peak};
}

Matrix2 effective_hamiltonian(const PulsePair& pair, const SystemParams& sys, double t) {
  const auto eff = effective_two_state(pair, sys, t);
  Matrix2 h;
  h << -0.25 * eff.detuning, 0.5 * eff.coupling, 0.5 * std::conj(eff.coupling),
      0.25 * eff.detuning;
  h += eff.stark_shift * Matrix2::Identity();
  return h;
}

Matrix2 propagate_effective(const PulsePair& pair, const SystemParams& sys,
                            const IntegratorOptions& opts) {
  pair.validate();
  effective_two_state(pair, sys, 0.0);  // argument checks
  const auto [t0, t1] = pair_window(pair);
  const auto breaks = pair_breakpoints(pair);
  const std::function<Matrix2(double)> h = [&](double t) {
    return effective_hamiltonian(pair, sys, t);
  };
  return integrate_segments<Matrix2>(h, t0, t1, opts, breaks, {});
}

double unitarity_defect(const Matrix3& u) {
  return (u.adjoint() * u - Matrix3::Identity()).cwiseAbs().maxCoeff();
}

}  // namespace cstirap
