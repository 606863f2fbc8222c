// Acceptance checks. Usage: acceptance [criterion...]; no argument runs all.
// Prints one [PASS]/[FAIL] line per criterion and exits nonzero on any failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cstirap/config.hpp"
#include "cstirap/dynamics.hpp"
#include "cstirap/experiments.hpp"
#include "cstirap/phases.hpp"
#include "cstirap/propalg.hpp"

using namespace cstirap;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int worker_count() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

double max_abs_diff(const Matrix3& a, const Matrix3& b) { return (a - b).cwiseAbs().maxCoeff(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

SequenceSpec sequence_of(SequenceSource source, int n) {
  SequenceSpec s;
  s.source = source;
  s.n = n;
  return s;
}

ScanSpec peak_scan(PulseKind kind, SequenceSpec seq, double lo, double hi, int points) {
  ScanSpec spec;
  spec.axes = {Axis{Parameter::Peak, lo, hi, points, Spacing::Linear}};
  spec.pulse.kind = kind;
  spec.sequence = seq;
  return spec;
}

// Widest interval of consecutive grid points with infidelity below `level`.
double widest_run(const std::vector<FidelityResult>& rows, double level) {
  double best = 0.0, start = 0.0;
  bool inside = false;
  for (const auto& r : rows) {
    if (r.ok() && r.infidelity < level) {
      if (!inside) start = r.coords[0];
      inside = true;
      best = std::max(best, r.coords[0] - start);
    } else {
      inside = false;
    }
  }
  return best;
}

Outcome ac1() {
  const std::map<int, std::vector<int>> resonant{
      {3, {0, 1, 3, 3, 1, 0}},
      {5, {0, 4, 5, 8, 3, 3, 8, 5, 4, 0}},
      {7, {0, 9, 7, 1, 5, 8, 12, 12, 8, 5, 1, 7, 9, 0}},
      {9, {0, 16, 9, 6, 7, 15, 16, 3, 12, 12, 3, 16, 15, 7, 6, 9, 16, 0}}};
  const std::map<int, std::vector<int>> cap{{3, {0, 1, 0}},
                                            {5, {0, 2, 1, 2, 0}},
                                            {7, {0, 3, 2, 4, 2, 3, 0}},
                                            {9, {0, 4, 3, 6, 4, 6, 3, 4, 0}}};
  int mismatches = 0;
  for (const auto& [n, row] : resonant) {
    const auto ex = *resonant_phases(n).exact;
    for (int k = 0; k < n; ++k) {
      mismatches += ex.pump[k] != row[2 * k];
      mismatches += ex.stokes[k] != row[2 * k + 1];
    }
  }
  for (const auto& [n, row] : cap) {
    const auto ex = *cap_phases(n).exact;
    for (int k = 0; k < n; ++k) {
      mismatches += ex.pump[k] != 2 * row[k];  // table is in units of 2pi/N
      mismatches += ex.stokes[k] != 0;
    }
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatched entries, N=3,5,7,9"};
}

Outcome ac2() {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> peak(0.0, 60.0), delay(0.02, 1.5), phase(-pi, pi),
      detuning(-50.0, 50.0), width(0.5, 2.0);
  double worst_unitarity = 0.0, worst_conservation = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const PulseKind kind = trial % 2 ? PulseKind::Gaussian : PulseKind::SineSquared;
    const double w = width(gen);
    const PulsePair pair = make_pulse_pair(kind, peak(gen), w, delay(gen) * w, phase(gen),
                                           phase(gen), trial % 4 == 3);
    const Propagator3 u = propagate(pair, SystemParams{detuning(gen), 0.0});
    worst_unitarity = std::max(worst_unitarity, unitarity_defect(u));
    const double total = u.col(0).squaredNorm();
    worst_conservation = std::max(worst_conservation, std::abs(total - 1.0));
  }
  return {worst_unitarity < 1e-8 && worst_conservation < 1e-8,
          "max |U'U-I| " + fmt("%.3g", worst_unitarity) + ", max |P1+P2+P3-1| " +
              fmt("%.3g", worst_conservation) + " over 200 sets"};
}

Outcome ac3() {
  const PulsePair base = make_pulse_pair(PulseKind::SineSquared, 30.0, 1.0);
  const Propagator3 u = propagate(base, SystemParams{});
  double worst = 0.0;
  for (int n : {3, 5}) {
    const CompositeSequence seq = resonant_phases(n);
    const PulseTrain train =
        PulseTrain::back_to_back(base, seq.pump_phases, seq.stokes_phases, true);
    const Propagator3 direct = propagate(train, SystemParams{});
    const Propagator3 composed = compose_sequence(u, seq.pump_phases, seq.stokes_phases, true);
    worst = std::max(worst, max_abs_diff(direct, composed));
  }
  return {worst < 1e-7, "max elementwise difference " + fmt("%.3g", worst) + " (N=3, 5)"};
}

Outcome ac4() {
  double worst_lift = 0.0, worst_mirror = 0.0;
  for (PulseKind kind : {PulseKind::SineSquared, PulseKind::Gaussian}) {
    for (double peak : {2.0, 10.0, 30.0, 60.0}) {
      const PulsePair pair = make_pulse_pair(kind, peak, 1.0);
      const CayleyKlein ck = extract_ck(propagate_two_state(pair, SystemParams{}));
      worst_lift = std::max(worst_lift, max_abs_diff(lift_to_three(ck), propagate(pair, {})));
      worst_mirror = std::max(worst_mirror, std::abs(ck.a.imag() + ck.b.imag()));
    }
  }
  return {worst_lift < 1e-8 && worst_mirror < 1e-8,
          "lift vs direct " + fmt("%.3g", worst_lift) + ", |Im a + Im b| " +
              fmt("%.3g", worst_mirror)};
}

Outcome ac5() {
  bool pass = true;
  std::string detail;
  const int threads = worker_count();
  for (PulseKind kind : {PulseKind::SineSquared, PulseKind::Gaussian}) {
    const auto one = run_scan(peak_scan(kind, {}, 0.0, 60.0, 241), threads);
    const auto three =
        run_scan(peak_scan(kind, sequence_of(SequenceSource::Resonant, 3), 0.0, 60.0, 241), threads);
    const auto five =
        run_scan(peak_scan(kind, sequence_of(SequenceSource::Resonant, 5), 0.0, 60.0, 241), threads);
    int witnesses = 0;
    for (std::size_t i = 0; i < one.size(); ++i) {
      witnesses += three[i].infidelity < 1e-6 && one[i].infidelity > 1e-3;
    }
    const double w3 = widest_run(three, 1e-6);
    const double w5 = widest_run(five, 1e-6);
    pass = pass && witnesses > 0 && w5 > w3;
    detail += std::string(kind == PulseKind::Gaussian ? "gaussian" : "sin^2") + ": " +
              std::to_string(witnesses) + " points with N=3<1e-6 & N=1>1e-3, plateau N=3 " +
              fmt("%.4g", w3) + " N=5 " + fmt("%.4g", w5) + "; ";
  }
  return {pass, detail};
}

Outcome ac6() {
  bool pass = true;
  std::string detail;
  const int threads = worker_count();
  struct Panel {
    double detuning;
    SequenceSource source;
    double peak_max;
  };
  for (const Panel& panel : {Panel{0.0, SequenceSource::Resonant, 60.0},
                             Panel{100.0, SequenceSource::Cap, 200.0}}) {
    ScanSpec spec;
    spec.axes = {Axis{Parameter::Delay, 0.025, 1.0, 40, Spacing::Linear},
                 Axis{Parameter::Peak, panel.peak_max / 40.0, panel.peak_max, 40, Spacing::Linear}};
    spec.system.detuning = panel.detuning;
    const auto one = run_scan(spec, threads);
    spec.sequence = sequence_of(panel.source, 5);
    const auto five = run_scan(spec, threads);
    int a1 = 0, a5 = 0;
    for (std::size_t i = 0; i < one.size(); ++i) {
      a1 += one[i].ok() && one[i].infidelity < 1e-4;
      a5 += five[i].ok() && five[i].infidelity < 1e-4;
    }
    pass = pass && a5 > a1;
    detail += "Delta=" + fmt("%g", panel.detuning) + ": area N=1 " + std::to_string(a1) +
              ", N=5 " + std::to_string(a5) + " of 1600; ";
  }
  return {pass, detail};
}

Outcome ac7() {
  const double peak = 40.0;
  ScanSpec spec = peak_scan(PulseKind::SineSquared, sequence_of(SequenceSource::Resonant, 3),
                            peak, peak + 1.0, 2);
  const double clean =
      evaluate_point(PulseTemplate{PulseKind::SineSquared, peak, 1.0, {}}, {}, spec.sequence, {})
          .infidelity;
  const auto rows = monte_carlo_phase_noise(spec, NoiseSpec{0.01, 1000, 1}, worker_count());
  const double mean = rows[0].infidelity;
  return {clean < 1e-6 && mean < 1e-4,
          "Omega0=40: noise-free " + fmt("%.3g", clean) + ", sigma=0.01 mean " + fmt("%.3g", mean) +
              " +- " + fmt("%.2g", rows[0].infidelity_sem)};
}

Outcome ac8() {
  ScanSpec spec = peak_scan(PulseKind::SineSquared, sequence_of(SequenceSource::Resonant, 3), 0.0,
                            1.0, 2);
  spec.pulse.peak = 30.0;
  std::vector<double> gammas;
  for (int i = 0; i <= 40; ++i) gammas.push_back(0.01 * std::pow(10.0, 3.0 * i / 40.0));
  gammas.push_back(1.0);
  std::sort(gammas.begin(), gammas.end());
  const auto rows = decay_scan(spec, gammas, worker_count());
  bool below = true, reverses = false;
  double first_loss = -1.0;
  for (const auto& r : rows) {
    const bool composite_wins = r.composite.infidelity < r.single.infidelity;
    if (r.gamma <= 1.0 && !composite_wins) {
      below = false;
      if (first_loss < 0.0) first_loss = r.gamma;
    }
    if (r.gamma > 1.0 && !composite_wins) reverses = true;
  }
  const auto at = [&](double g) {
    return *std::find_if(rows.begin(), rows.end(), [&](const DecayPoint& p) { return p.gamma == g; });
  };
  const DecayPoint g1 = at(1.0);
  std::string detail = "gamma=1: single " + fmt("%.3g", g1.single.infidelity) + ", N=3 " +
                       fmt("%.3g", g1.composite.infidelity);
  if (first_loss >= 0.0) detail += "; composite already loses at gamma=" + fmt("%.3g", first_loss);
  detail += reverses ? "; ordering reversed above 1" : "; no reversal above 1";
  return {below && reverses, detail};
}

Outcome ac9() {
  ScanSpec spec = peak_scan(PulseKind::SineSquared, sequence_of(SequenceSource::Resonant, 3), 0.0,
                            1.0, 2);
  CompensationSpec comp;  // gamma in {0.1, 0.2, 0.5, 1}, threshold 1e-3
  const CompensationResult res = decay_compensation_check(spec, comp, worker_count());
  std::string detail;
  for (const auto& row : res.rows) {
    detail += "gamma=" + fmt("%g", row.gamma) + " -> " +
              (row.required_peak ? fmt("%.4g", *row.required_peak) : std::string("none")) + "; ";
  }
  if (!res.exponent) return {false, detail + "no exponent"};
  const double e = *res.exponent;
  return {e >= 0.3 && e <= 0.7, detail + "exponent " + fmt("%.3f", e)};
}

Outcome ac10() {
  const std::vector<std::string> configs{
      R"({"experiment": "montecarlo", "seed": 7, "montecarlo": {"sigma": 0.01, "samples": 200},
          "sequence": {"source": "resonant", "n": 3},
          "grid": [{"parameter": "peak", "min": 10, "max": 60, "points": 11}]})",
      R"({"experiment": "contour", "sequence": {"source": "resonant", "n": 5},
          "grid": [{"parameter": "delay", "min": 0.05, "max": 1, "points": 8},
                   {"parameter": "peak", "min": 2, "max": 60, "points": 8}]})",
      R"({"experiment": "decay", "sequence": {"source": "resonant", "n": 3},
          "grid": [{"parameter": "decay", "min": 0.01, "max": 10, "points": 13, "spacing": "log"}]})"};
  int identical = 0;
  for (const auto& text : configs) {
    const RunConfig cfg = *parse_config(text).config;
    std::ostringstream a, b, c;
    run_experiment(cfg, a, 1);
    run_experiment(cfg, b, 8);
    run_experiment(cfg, c, 1);
    identical += a.str() == b.str() && a.str() == c.str();
  }
  return {identical == static_cast<int>(configs.size()),
          std::to_string(identical) + "/" + std::to_string(configs.size()) +
              " configs byte-identical across reruns and 1 vs 8 threads"};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> kCriteria{
    {"phase tables", ac1},
    {"unitarity and conservation", ac2},
    {"composition vs direct integration", ac3},
    {"two-state mapping", ac4},
    {"Rabi-frequency scans", ac5},
    {"delay x Rabi-frequency contours", ac6},
    {"phase-noise Monte Carlo", ac7},
    {"decay crossover", ac8},
    {"decay compensation scaling", ac9},
    {"deterministic output", ac10},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty()) {
    for (int i = 1; i <= static_cast<int>(kCriteria.size()); ++i) selected.push_back(i);
  }
  int failures = 0;
  for (int id : selected) {
    if (id < 1 || id > static_cast<int>(kCriteria.size())) {
      std::fprintf(stderr, "unknown criterion %d\n", id);
      return 2;
    }
    const auto& [name, run] = kCriteria[id - 1];
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] AC%d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
