#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cstirap/dynamics.hpp"
#include "cstirap/ode.hpp"
#include "cstirap/pulses.hpp"

namespace cstirap {

/// Phases that are exact multiples of pi/N, stored as integers in [0, 2N).
struct ExactPhases {
  int denominator = 1;  // N
  std::vector<int> pump;
  std::vector<int> stokes;
};

struct CompositeSequence {
  int n_pairs = 1;
  std::vector<double> pump_phases;
  std::vector<double> stokes_phases;
  bool alternate_ordering = true;
  std::optional<ExactPhases> exact;

  void validate() const;
};

enum class PhaseRegime { Resonant, FarOffResonant };

/// Resonant composite phases: alpha_k = pi floor(k/2) - (pi/N) m (1 + m) with
/// m = floor((k-1)/2), and beta_k = alpha_{N+1-k}. Alternating pair order.
CompositeSequence resonant_phases(int n);

/// Far-off-resonant phases alpha_k - beta_k = (N + 1 - 2 floor((k+1)/2))
/// floor(k/2) pi/N with all beta_k = 0. Fixed pair order.
CompositeSequence cap_phases(int n);

CompositeSequence phases_for(PhaseRegime regime, int n);

/// Single pair with zero phases.
CompositeSequence single_pair();

/// The composite sequence built from `pair`: forward propagator of the zero-phase
/// pair composed with phases and ordering taken from `seq`.
Propagator3 sequence_propagator(const PulsePair& pair, const SystemParams& sys,
                                const CompositeSequence& seq, double gap = 0.0,
                                const IntegratorOptions& opts = {});

/// 1 - |U31|^2
double transfer_infidelity(const Propagator3& u);

struct SolverOptions {
  int max_iterations = 2000;
  double phase_tolerance = 1e-6;
  double initial_step = 0.05;
  double gap = 0.0;
  IntegratorOptions integrator{};

  bool operator==(const SolverOptions&) const = default;
};

struct PhaseSolution {
  CompositeSequence sequence;
  double infidelity = 1.0;
  double seed_infidelity = 1.0;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes the transfer infidelity of the composed sequence over the phases,
/// starting from `seed`. alpha_1 and beta_1 stay fixed since a common shift
/// of all pump (or all Stokes) phases leaves the populations unchanged. The
/// result never has higher infidelity than the seed.
PhaseSolution solve_phases(const PulsePair& pair, const SystemParams& sys,
                           const CompositeSequence& seed, const SolverOptions& opts = {});

/// "(0, 1; 3, 3; 1, 0)pi/3" for resonant, "(0, 1, 0)2pi/3" for far-off-resonant.
std::string format_phase_table(PhaseRegime regime, int n);

}  // namespace cstirap
