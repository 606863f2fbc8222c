#pragma once

#include <optional>
#include <span>

#include "cstirap/dynamics.hpp"

namespace cstirap {

/// SU(2) propagator [[a, b], [-b*, a*]] of the equivalent two-state problem.
struct CayleyKlein {
  Complex a{1.0, 0.0};
  Complex b{0.0, 0.0};
};

/// a = cos(theta) cos(phi) + i sin(theta)/sqrt(2)
/// b = cos(theta) sin(phi) - i sin(theta)/sqrt(2)
/// theta in [-pi/2, pi/2], phi in (-pi, pi]. Only defined when Im a = -Im b.
struct CKAngles {
  double theta = 0.0;
  double phi = 0.0;
};

Propagator3 lift_to_three(const CayleyKlein& ck);

CayleyKlein extract_ck(const Matrix2& u2);

CKAngles to_angles(const CayleyKlein& ck);
CayleyKlein from_angles(const CKAngles& angles);

/// R U R with R exchanging states 1 and 3: the propagator of the same pair
/// with pump and Stokes swapped in time.
Propagator3 reverse(const Propagator3& u);

/// Phi U Phi^dagger, Phi = diag(e^{i alpha}, 1, e^{-i beta}).
Propagator3 phase_imprint(const Propagator3& u, double alpha, double beta);

/// U(N) = U_N ... U_2 U_1 where pair k carries its phases (alpha_k, beta_k)
/// and, with `alternate`, even-numbered pairs use reverse(U_k). `gap`, when
/// given, is applied between consecutive pairs.
Propagator3 compose_sequence(std::span<const Propagator3> propagators,
                             std::span<const double> pump_phases,
                             std::span<const double> stokes_phases, bool alternate,
                             const std::optional<Propagator3>& gap = std::nullopt);

/// Same pair propagator repeated N times.
Propagator3 compose_sequence(const Propagator3& pair_propagator,
                             std::span<const double> pump_phases,
                             std::span<const double> stokes_phases, bool alternate,
                             const std::optional<Propagator3>& gap = std::nullopt);

/// Pair ordering protocol for a detuning: alternate on one-photon resonance,
/// fixed order once |Delta| T >= 1. Between the two, the caller must choose.
std::optional<bool> default_alternation(double detuning);

}  // namespace cstirap
