#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace cstirap {

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  std::size_t max_steps = 5'000'000;

  bool operator==(const IntegratorOptions&) const = default;
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double time)
      : std::runtime_error(what + " at t = " + std::to_string(time)), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

struct IntegrationStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// Dormand-Prince 5(4) with PI step-size control (Hairer, Norsett, Wanner,
/// "Solving ODEs I", sec. II.4). `State` is any fixed-size Eigen object with
/// complex or real coefficients; `rhs(t, y)` returns dy/dt. The observer, if
/// given, is called after every accepted step.
template <class State>
class DormandPrince45 {
 public:
  using Rhs = std::function<State(double, const State&)>;
  using Observer = std::function<void(double, const State&)>;

  explicit DormandPrince45(IntegratorOptions opts = {}) : opts_(opts) {
    if (!(opts_.rtol > 0.0) || !(opts_.atol >= 0.0)) {
      throw std::invalid_argument("integrator tolerances must be positive");
    }
  }

  State integrate(const Rhs& rhs, State y, double t0, double t1,
                  const Observer& observer = {}) {
    if (!(t1 > t0)) throw std::invalid_argument("integration interval must satisfy t_i < t_f");
    const double span = t1 - t0;
    double t = t0;
    State k1 = rhs(t, y);
    double h = initial_step(rhs, y, k1, t, span);
    double err_old = 1e-4;
    bool last_rejected = false;

    for (std::size_t steps = 0;; ++steps) {
      if (steps >= opts_.max_steps) throw IntegrationError("step budget exhausted", t);
      if (t + h >= t1) h = t1 - t;
      if (h < 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0)) {
        throw IntegrationError("step size underflow", t);
      }

      const State k2 = rhs(t + kC2 * h, y + h * (kA21 * k1));
      const State k3 = rhs(t + kC3 * h, y + h * (kA31 * k1 + kA32 * k2));
      const State k4 = rhs(t + kC4 * h, y + h * (kA41 * k1 + kA42 * k2 + kA43 * k3));
      const State k5 =
          rhs(t + kC5 * h, y + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4));
      const State k6 = rhs(
          t + h, y + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5));
      const State y_new =
          y + h * (kA71 * k1 + kA73 * k3 + kA74 * k4 + kA75 * k5 + kA76 * k6);
      const State k7 = rhs(t + h, y_new);
      const State err_vec =
          h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);

      const double err = error_norm(err_vec, y, y_new);
      if (!std::isfinite(err)) throw IntegrationError("non-finite error estimate", t);

      // PI controller, beta = 0.04.
      const double fac11 = std::pow(err, 0.2 - 0.04 * 0.75);
      if (err <= 1.0) {
        double fac = fac11 / std::pow(err_old, 0.04);
        fac = std::clamp(fac / 0.9, 0.2, 10.0);
        double h_new = h / fac;
        if (last_rejected) h_new = std::min(h_new, h);
        err_old = std::max(err, 1e-4);
        t += h;
        y = y_new;
        k1 = k7;
        ++stats_.accepted;
        last_rejected = false;
        if (observer) observer(t, y);
        if (t >= t1) return y;
        h = h_new;
      } else {
        h /= std::min(5.0, fac11 / 0.9);
        ++stats_.rejected;
        last_rejected = true;
      }
    }
  }

  const IntegrationStats& stats() const { return stats_; }

 private:
  double error_norm(const State& e, const State& y0, const State& y1) const {
    // Max norm: every propagator entry meets the tolerance, not just their average.
    double worst = 0.0;
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      const double scale =
          opts_.atol + opts_.rtol * std::max(std::abs(y0.data()[i]), std::abs(y1.data()[i]));
      worst = std::max(worst, std::abs(e.data()[i]) / scale);
    }
    return worst;
  }

  double initial_step(const Rhs& rhs, const State& y, const State& f0, double t,
                      double span) const {
    const double d0 = y.norm();
    const double d1 = f0.norm();
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);
    const State f1 = rhs(t + h0, y + h0 * f0);
    const double d2 = (f1 - f0).norm() / h0;
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    return std::min({100.0 * h0, h1, span});
  }

  static constexpr double kC2 = 1.0 / 5.0, kC3 = 3.0 / 10.0, kC4 = 4.0 / 5.0, kC5 = 8.0 / 9.0;
  static constexpr double kA21 = 1.0 / 5.0;
  static constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
  static constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
  static constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                          kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
  static constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0,
                          kA63 = 46732.0 / 5247.0, kA64 = 49.0 / 176.0,
                          kA65 = -5103.0 / 18656.0;
  static constexpr double kA71 = 35.0 / 384.0, kA73 = 500.0 / 1113.0, kA74 = 125.0 / 192.0,
                          kA75 = -2187.0 / 6784.0, kA76 = 11.0 / 84.0;
  // Difference between the 5th- and embedded 4th-order weights.
  static constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                          kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

  IntegratorOptions opts_;
  IntegrationStats stats_;
};

}  // namespace cstirap
