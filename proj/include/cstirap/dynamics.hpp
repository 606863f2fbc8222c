#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>

#include "cstirap/ode.hpp"
#include "cstirap/pulses.hpp"

namespace cstirap {

using Complex = std::complex<double>;
using Matrix3 = Eigen::Matrix3cd;
using Matrix2 = Eigen::Matrix2cd;
using StateVector = Eigen::Vector3cd;

/// Maps amplitudes c(t_i) to c(t_f); later propagators multiply on the left.
using Propagator3 = Matrix3;

struct SystemParams {
  double detuning = 0.0;  // one-photon detuning Delta
  double decay = 0.0;     // loss rate gamma of the intermediate state

  void validate() const;
  bool operator==(const SystemParams&) const = default;
};

/// H(t) = 1/2 [[0, Op, 0], [Op*, 2 Delta - i gamma, Os], [0, Os*, 0]].
Matrix3 hamiltonian(std::complex<double> pump, std::complex<double> stokes,
                    const SystemParams& sys);
Matrix3 hamiltonian(const PulsePair& pair, const SystemParams& sys, double t);
Matrix3 hamiltonian(const PulseTrain& train, const SystemParams& sys, double t);

using HamiltonianFn = std::function<Matrix3(double)>;
using TrajectoryObserver = std::function<void(double, const Propagator3&)>;

/// Integrates i dU/dt = H(t) U from U(t_i) = I. The integrator is restarted at
/// each breakpoint inside (t_i, t_f).
Propagator3 propagate(const HamiltonianFn& h, double t_i, double t_f,
                      const IntegratorOptions& opts = {},
                      std::span<const double> breakpoints = {},
                      const TrajectoryObserver& observer = {});

/// Propagator across the pair's full window.
Propagator3 propagate(const PulsePair& pair, const SystemParams& sys,
                      const IntegratorOptions& opts = {});
Propagator3 propagate(const PulsePair& pair, const SystemParams& sys, double t_i, double t_f,
                      const IntegratorOptions& opts = {});

/// Propagator across the whole train, integrated directly with the summed field.
Propagator3 propagate(const PulseTrain& train, const SystemParams& sys,
                      const IntegratorOptions& opts = {});

StateVector propagate_state(const StateVector& initial, const PulsePair& pair,
                            const SystemParams& sys, const IntegratorOptions& opts = {});
StateVector propagate_state(const StateVector& initial, const PulseTrain& train,
                            const SystemParams& sys, const IntegratorOptions& opts = {});

/// Field-free evolution of the given duration: only state 2 acquires a phase
/// and decays.
Propagator3 free_propagator(const SystemParams& sys, double duration);

/// Equivalent two-state Hamiltonian of the resonant, lossless, real-field
/// problem: 1/4 [[-Os, Op], [Op, Os]]. Its SU(2) propagator [[a, b], [-b*, a*]]
/// lifts to the three-state propagator (see lift_to_three). Rejects pairs with
/// nonzero phases and systems with nonzero detuning or decay.
Eigen::Matrix2d resonant_two_state_hamiltonian(const PulsePair& pair, const SystemParams& sys,
                                               double t);

Matrix2 propagate_two_state(const PulsePair& pair, const SystemParams& sys,
                            const IntegratorOptions& opts = {});

/// Coupling and detuning of the two-state model obtained by eliminating the
/// intermediate state at large detuning.
struct EffectiveCoupling {
  std::complex<double> coupling;  // -Op Os / (2 Delta)
  double detuning;                // (|Op|^2 - |Os|^2) / (2 Delta)
  double stark_shift;             // -(|Op|^2 + |Os|^2) / (8 Delta), common to both states
  bool regime_ok;                 // |Delta| >= 10 max(peak)
};

EffectiveCoupling effective_two_state(const PulsePair& pair, const SystemParams& sys, double t);

/// Effective Hamiltonian on {|1>, |3>}:
///   1/2 [[-Deff/2, Oeff], [Oeff*, Deff/2]] + stark_shift * I.
Matrix2 effective_hamiltonian(const PulsePair& pair, const SystemParams& sys, double t);

Matrix2 propagate_effective(const PulsePair& pair, const SystemParams& sys,
                            const IntegratorOptions& opts = {});

/// max |(U^dagger U - I)_ij|
double unitarity_defect(const Matrix3& u);

}  // namespace cstirap
