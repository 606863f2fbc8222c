#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cstirap/pulses.hpp"

using namespace cstirap;

namespace {

// Time of the largest sample of f on a fine grid.
template <class F>
double argmax_on_grid(F f, double t0, double t1, int samples = 200001) {
  double best_t = t0, best = -1.0;
  for (int i = 0; i < samples; ++i) {
    const double t = t0 + (t1 - t0) * i / (samples - 1);
    const double v = f(t);
    if (v > best) {
      best = v;
      best_t = t;
    }
  }
  return best_t;
}

}  // namespace

TEST_CASE("envelope values") {
  const PulseShape g{PulseKind::Gaussian, 1.0, 1.0, 0.3};
  CHECK(envelope(g, 0.3) == doctest::Approx(1.0));
  CHECK(envelope(g, 1.3) == doctest::Approx(0.36787944117144233).epsilon(1e-14));

  const PulseShape s{PulseKind::SineSquared, 1.0, 1.0, 2.0};
  CHECK(envelope(s, 2.5) == doctest::Approx(1.0));
  CHECK(std::abs(envelope(s, 2.0)) < 1e-30);
  CHECK(std::abs(envelope(s, 3.0)) < 1e-30);
  CHECK(envelope(s, 1.999) == 0.0);
  CHECK(envelope(s, 3.001) == 0.0);
}

TEST_CASE("default delays") {
  CHECK(default_delay(PulseKind::Gaussian, 1.0) == 1.0);
  CHECK(default_delay(PulseKind::SineSquared, 1.0) == doctest::Approx(1.0 / std::numbers::pi));
  CHECK(default_delay(PulseKind::SineSquared, 2.0) == doctest::Approx(2.0 / std::numbers::pi));
}

TEST_CASE("pair envelopes and phases") {
  const double tau = 1.0;
  const PulsePair gp = make_pulse_pair(PulseKind::Gaussian, 2.0, 1.0, tau);

  SUBCASE("Stokes precedes pump by the delay") {
    const auto [p, s] = pair_envelopes(gp, -0.5 * tau);
    CHECK(s.real() == doctest::Approx(2.0));
    CHECK(p.real() == doctest::Approx(2.0 * std::exp(-1.0)));
    const double tp = argmax_on_grid([&](double t) { return pair_envelopes(gp, t).first.real(); },
                                     -3.0, 3.0);
    const double ts = argmax_on_grid([&](double t) { return pair_envelopes(gp, t).second.real(); },
                                     -3.0, 3.0);
    CHECK(tp - ts == doctest::Approx(tau).epsilon(1e-4));
  }

  SUBCASE("pump phase pi/2 gives an imaginary pump amplitude") {
    const PulsePair ph = make_pulse_pair(PulseKind::Gaussian, 2.0, 1.0, tau, std::numbers::pi / 2);
    const auto [p, s] = pair_envelopes(ph, 0.5 * tau);
    CHECK(std::abs(p.real()) < 1e-15);
    CHECK(p.imag() == doctest::Approx(2.0));
    CHECK(s.imag() == 0.0);
  }

  SUBCASE("reversal swaps positions but not phases") {
    const PulsePair rev = make_pulse_pair(PulseKind::Gaussian, 2.0, 1.0, tau, 0.4, -0.7, true);
    const double tp = argmax_on_grid([&](double t) { return std::abs(pair_envelopes(rev, t).first); },
                                     -3.0, 3.0);
    const double ts = argmax_on_grid(
        [&](double t) { return std::abs(pair_envelopes(rev, t).second); }, -3.0, 3.0);
    CHECK(tp == doctest::Approx(-0.5 * tau).epsilon(1e-4));
    CHECK(ts == doctest::Approx(0.5 * tau).epsilon(1e-4));
    const auto [p, s] = pair_envelopes(rev, 0.1);
    CHECK(std::arg(p) == doctest::Approx(0.4));
    CHECK(std::arg(s) == doctest::Approx(-0.7));
  }
}

TEST_CASE("sine-squared placement") {
  const double tau = 1.0 / std::numbers::pi;
  const PulsePair sp = make_pulse_pair(PulseKind::SineSquared, 1.0, 1.0, tau);
  CHECK(sp.stokes.origin == 0.0);
  CHECK(sp.pump.origin == tau);
  const auto [w0, w1] = pair_window(sp);
  CHECK(w0 == 0.0);
  CHECK(w1 == doctest::Approx(1.0 + tau));
  CHECK(peak_time(sp.pump) - peak_time(sp.stokes) == doctest::Approx(tau));
}

TEST_CASE("reflection symmetry of identical shapes") {
  for (PulseKind kind : {PulseKind::Gaussian, PulseKind::SineSquared}) {
    const PulsePair pair = make_pulse_pair(kind, 3.0, 1.0);
    // Omega_p(t) = Omega_s(mirror - t) with mirror = sum of the two peak times.
    const double mirror = peak_time(pair.pump) + peak_time(pair.stokes);
    const auto [w0, w1] = pair_window(pair);
    double worst = 0.0;
    for (int i = 0; i <= 20000; ++i) {
      const double t = w0 + (w1 - w0) * i / 20000.0;
      worst = std::max(worst, std::abs(pair_envelopes(pair, t).first.real() -
                                       pair_envelopes(pair, mirror - t).second.real()));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("envelopes are non-negative and double reversal is the identity") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::uniform_real_distribution<double> pos(0.01, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const PulseKind kind = trial % 2 ? PulseKind::Gaussian : PulseKind::SineSquared;
    const PulseShape shape{kind, pos(gen), pos(gen), u(gen)};
    CHECK(envelope(shape, u(gen)) >= 0.0);

    PulsePair pair = make_pulse_pair(kind, pos(gen), pos(gen), pos(gen), u(gen), u(gen));
    PulsePair twice = pair;
    twice.reversed = !twice.reversed;
    twice.reversed = !twice.reversed;
    const double t = u(gen);
    CHECK(pair_envelopes(pair, t) == pair_envelopes(twice, t));

    PulsePair flipped = pair;
    flipped.reversed = true;
    CHECK(std::abs(pair_envelopes(flipped, t).first) ==
          doctest::Approx(std::abs(pair_envelopes(pair, t).second)));
  }
}

TEST_CASE("invalid shapes and pairs are rejected") {
  CHECK_THROWS_AS(make_pulse_pair(PulseKind::Gaussian, -1.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_pulse_pair(PulseKind::Gaussian, 1.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_pulse_pair(PulseKind::SineSquared, 1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("back-to-back trains") {
  const PulsePair base = make_pulse_pair(PulseKind::SineSquared, 5.0, 1.0);
  const std::vector<double> alpha{0.0, 1.0, 2.0};
  const std::vector<double> beta{0.5, 1.5, 2.5};
  const PulseTrain train = PulseTrain::back_to_back(base, alpha, beta, true, 0.25);
  REQUIRE(train.slots().size() == 3);
  const double len = pair_window(base).second - pair_window(base).first;
  CHECK(train.window().second == doctest::Approx(3 * len + 2 * 0.25));
  CHECK_FALSE(train.slots()[0].pair.reversed);
  CHECK(train.slots()[1].pair.reversed);
  CHECK_FALSE(train.slots()[2].pair.reversed);
  CHECK(train.slots()[1].pair.pump_phase == 1.0);

  // Inside the gap the field vanishes.
  const auto [p, s] = train.envelopes(len + 0.1);
  CHECK(std::abs(p) == 0.0);
  CHECK(std::abs(s) == 0.0);
  // Second pair is reversed: pump first.
  const double local_pump_peak = peak_time(base.stokes);
  const auto p2 = train.envelopes(train.slots()[1].offset + local_pump_peak).first;
  CHECK(std::abs(p2) == doctest::Approx(5.0));
  CHECK(std::arg(p2) == doctest::Approx(1.0));

  CHECK_THROWS_AS(PulseTrain::back_to_back(base, alpha, std::vector<double>{0.0}, true),
                  std::invalid_argument);
}
