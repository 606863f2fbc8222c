#include "cstirap/propalg.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cstirap {

namespace {

constexpr double kNormTolerance = 1e-8;  // same as the SU(2) check, so extract then lift composes
constexpr double kSu2Tolerance = 1e-8;
constexpr double kMirrorTolerance = 1e-6;

}  // namespace

Propagator3 lift_to_three(const CayleyKlein& ck) {
  const Complex a = ck.a;
  const Complex b = ck.b;
  const double norm = std::norm(a) + std::norm(b);
  if (std::abs(norm - 1.0) > kNormTolerance) {
    std::ostringstream msg;
    msg << "Cayley-Klein parameters not normalized: |a|^2 + |b|^2 = " << norm;
    throw std::invalid_argument(msg.str());
  }
  const Complex i{0.0, 1.0};
  const Complex ab_conj = a * std::conj(b);
  const Complex ab = a * b;
  const Complex sum = a * a + b * b;
  const Complex diff = a * a - b * b;

  Propagator3 u;
  u(0, 0) = std::norm(a) - std::norm(b);
  u(0, 1) = -2.0 * i * ab_conj.imag();
  u(0, 2) = 2.0 * ab_conj.real();
  u(1, 0) = 2.0 * i * ab.imag();
  u(1, 1) = sum.real();
  u(1, 2) = -i * diff.imag();
  u(2, 0) = -2.0 * ab.real();
  u(2, 1) = -i * sum.imag();
  u(2, 2) = diff.real();
  return u;
}

CayleyKlein extract_ck(const Matrix2& u2) {
  const Complex a = u2(0, 0);
  const Complex b = u2(0, 1);
  double dev = std::max(std::abs(u2(1, 0) + std::conj(b)), std::abs(u2(1, 1) - std::conj(a)));
  dev = std::max(dev, std::abs(std::norm(a) + std::norm(b) - 1.0));
  if (dev > kSu2Tolerance) {
    std::ostringstream msg;
    msg << "matrix is not of SU(2) form [[a, b], [-b*, a*]]: max deviation " << dev;
    throw std::invalid_argument(msg.str());
  }
  return {a, b};
}

CKAngles to_angles(const CayleyKlein& ck) {
  const double mirror = std::abs(ck.a.imag() + ck.b.imag());
  if (mirror > kMirrorTolerance) {
    std::ostringstream msg;
    msg << "angle parameterization needs Im a = -Im b; |Im a + Im b| = " << mirror;
    throw std::invalid_argument(msg.str());
  }
  const double s = std::clamp(std::numbers::sqrt2 * 0.5 * (ck.a.imag() - ck.b.imag()), -1.0, 1.0);
  return {std::asin(s), std::atan2(ck.b.real(), ck.a.real())};
}

CayleyKlein from_angles(const CKAngles& angles) {
  const double c = std::cos(angles.theta);
  const double s = std::sin(angles.theta) / std::numbers::sqrt2;
  return {Complex{c * std::cos(angles.phi), s}, Complex{c * std::sin(angles.phi), -s}};
}

Propagator3 reverse(const Propagator3& u) {
  // R U R permutes both rows and columns 1 <-> 3.
  return u.reverse();
}

Propagator3 phase_imprint(const Propagator3& u, double alpha, double beta) {
  const Eigen::Vector3cd phi{std::polar(1.0, alpha), Complex{1.0, 0.0}, std::polar(1.0, -beta)};
  return phi.asDiagonal() * u * phi.conjugate().asDiagonal();
}

Propagator3 compose_sequence(std::span<const Propagator3> propagators,
                             std::span<const double> pump_phases,
                             std::span<const double> stokes_phases, bool alternate,
                             const std::optional<Propagator3>& gap) {
  const std::size_t n = propagators.size();
  if (n == 0 || n % 2 == 0) {
    throw std::invalid_argument("composite sequence needs an odd number of pairs, got " +
                                std::to_string(n));
  }
  if (pump_phases.size() != n || stokes_phases.size() != n) {
    throw std::invalid_argument("phase lists must have one entry per pair");
  }
  Propagator3 total = Propagator3::Identity();
  for (std::size_t k = 0; k < n; ++k) {
    const bool backward = alternate && (k % 2 == 1);
    const Propagator3 step =
        phase_imprint(backward ? reverse(propagators[k]) : propagators[k], pump_phases[k],
                      stokes_phases[k]);
    if (k > 0 && gap) total = (*gap) * total;
    total = step * total;
  }
  return total;
}

Propagator3 compose_sequence(const Propagator3& pair_propagator,
                             std::span<const double> pump_phases,
                             std::span<const double> stokes_phases, bool alternate,
                             const std::optional<Propagator3>& gap) {
  const std::vector<Propagator3> copies(pump_phases.size(), pair_propagator);
  return compose_sequence(std::span<const Propagator3>(copies), pump_phases, stokes_phases,
                          alternate, gap);
}

std::optional<bool> default_alternation(double detuning) {
  if (detuning == 0.0) return true;
  if (std::abs(detuning) >= 1.0) return false;
  return std::nullopt;
}

}  // namespace cstirap
