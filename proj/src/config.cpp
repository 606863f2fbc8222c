#include "cstirap/config.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cstirap/propalg.hpp"

namespace cstirap {

using nlohmann::json;

namespace {

// Walks a JSON object, recording every violation with its key path.
class Reader {
 public:
  Reader(std::vector<std::string>& errors) : errors_(errors) {}

  void error(const std::string& path, const std::string& msg) {
    errors_.push_back(path + ": " + msg);
  }

  bool object(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    if (!j.is_object()) {
      error(path, "expected an object");
      return false;
    }
    for (const auto& [key, value] : j.items()) {
      if (!allowed.contains(key)) error(join(path, key), "unknown key");
    }
    return true;
  }

  void real(const json& j, const std::string& path, const char* key, double& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number()) {
      error(join(path, key), "expected a number");
      return;
    }
    out = v.get<double>();
  }

  void integer(const json& j, const std::string& path, const char* key, int& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number_integer()) {
      error(join(path, key), "expected an integer");
      return;
    }
    out = v.get<int>();
  }

  void boolean(const json& j, const std::string& path, const char* key,
               std::optional<bool>& out) {
    if (!j.contains(key) || j.at(key).is_null()) return;
    if (!j.at(key).is_boolean()) {
      error(join(path, key), "expected true or false");
      return;
    }
    out = j.at(key).get<bool>();
  }

  void reals(const json& j, const std::string& path, const char* key, std::vector<double>& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_array()) {
      error(join(path, key), "expected an array of numbers");
      return;
    }
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        error(join(path, key) + "[" + std::to_string(i) + "]", "expected a number");
        continue;
      }
      out.push_back(v[i].get<double>());
    }
  }

  std::optional<std::string> string(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) return std::nullopt;
    if (!j.at(key).is_string()) {
      error(join(path, key), "expected a string");
      return std::nullopt;
    }
    return j.at(key).get<std::string>();
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

 private:
  std::vector<std::string>& errors_;
};

// Runs a validate() call and records its message under `path`.
void check(Reader& r, const std::string& path, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    r.error(path, e.what());
  }
}

std::string shape_name(PulseKind k) {
  return k == PulseKind::Gaussian ? "gaussian" : "sine_squared";
}

std::string source_name(SequenceSource s) {
  switch (s) {
    case SequenceSource::Single:
      return "single";
    case SequenceSource::Resonant:
      return "resonant";
    case SequenceSource::Cap:
      return "cap";
    case SequenceSource::Explicit:
      return "explicit";
  }
  return "?";
}

void read_pulse(Reader& r, const json& j, PulseTemplate& pulse) {
  if (!r.object(j, "pulse", {"shape", "peak", "width", "delay"})) return;
  if (auto s = r.string(j, "pulse", "shape")) {
    if (*s == "gaussian") {
      pulse.kind = PulseKind::Gaussian;
    } else if (*s == "sine_squared") {
      pulse.kind = PulseKind::SineSquared;
    } else {
      r.error("pulse.shape", "expected \"gaussian\" or \"sine_squared\", got \"" + *s + "\"");
    }
  }
  r.real(j, "pulse", "peak", pulse.peak);
  r.real(j, "pulse", "width", pulse.width);
  if (j.contains("delay") && !j.at("delay").is_null()) {
    double d = 0.0;
    r.real(j, "pulse", "delay", d);
    pulse.delay = d;
  }
}

void read_sequence(Reader& r, const json& j, SequenceSpec& seq) {
  if (!r.object(j, "sequence",
                {"source", "n", "pump_phases", "stokes_phases", "alternate", "gap"})) {
    return;
  }
  if (auto s = r.string(j, "sequence", "source")) {
    bool found = false;
    for (auto src : {SequenceSource::Single, SequenceSource::Resonant, SequenceSource::Cap,
                     SequenceSource::Explicit}) {
      if (source_name(src) == *s) {
        seq.source = src;
        found = true;
      }
    }
    if (!found) r.error("sequence.source", "expected single, resonant, cap or explicit");
  }
  r.integer(j, "sequence", "n", seq.n);
  r.reals(j, "sequence", "pump_phases", seq.pump_phases);
  r.reals(j, "sequence", "stokes_phases", seq.stokes_phases);
  r.boolean(j, "sequence", "alternate", seq.alternate);
  r.real(j, "sequence", "gap", seq.gap);
}

void read_grid(Reader& r, const json& j, std::vector<Axis>& axes) {
  if (!j.is_array()) {
    r.error("grid", "expected an array of axes");
    return;
  }
  axes.clear();
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string path = "grid[" + std::to_string(i) + "]";
    Axis axis;
    if (!r.object(j[i], path, {"parameter", "min", "max", "points", "spacing"})) continue;
    if (auto p = r.string(j[i], path, "parameter")) {
      if (auto parsed = parse_parameter(*p)) {
        axis.parameter = *parsed;
      } else {
        r.error(path + ".parameter", "expected peak, delay, detuning or decay");
      }
    } else {
      r.error(path + ".parameter", "required");
    }
    for (const char* key : {"min", "max", "points"}) {
      if (!j[i].contains(key)) r.error(path + "." + key, "required");
    }
    r.real(j[i], path, "min", axis.min);
    r.real(j[i], path, "max", axis.max);
    r.integer(j[i], path, "points", axis.points);
    if (auto s = r.string(j[i], path, "spacing")) {
      if (*s == "linear") {
        axis.spacing = Spacing::Linear;
      } else if (*s == "log") {
        axis.spacing = Spacing::Log;
      } else {
        r.error(path + ".spacing", "expected \"linear\" or \"log\"");
      }
    }
    check(r, path, [&] { axis.validate(); });
    axes.push_back(axis);
  }
}

void validate_experiment(Reader& r, const RunConfig& c) {
  const std::size_t axes = c.scan.axes.size();
  const auto need_axes = [&](std::size_t n, const char* what) {
    if (axes != n) r.error("grid", std::string(what) + " (got " + std::to_string(axes) + ")");
  };
  switch (c.experiment) {
    case ExperimentKind::Simulate:
      need_axes(0, "simulate takes no grid axes");
      break;
    case ExperimentKind::Scan:
      need_axes(1, "scan needs exactly one grid axis");
      break;
    case ExperimentKind::Contour:
      need_axes(2, "contour needs exactly two grid axes");
      break;
    case ExperimentKind::MonteCarlo:
      if (axes > 2) r.error("grid", "montecarlo takes at most two grid axes");
      break;
    case ExperimentKind::Decay:
      need_axes(1, "decay needs exactly one grid axis");
      if (axes == 1 && c.scan.axes[0].parameter != Parameter::Decay) {
        r.error("grid[0].parameter", "decay scan must sweep \"decay\"");
      }
      break;
    case ExperimentKind::Compensation:
      need_axes(0, "compensation takes no grid axes");
      check(r, "compensation", [&] { c.compensation.validate(); });
      break;
    case ExperimentKind::Phases:
      break;
    case ExperimentKind::SolvePhases:
      need_axes(0, "solve-phases takes no grid axes");
      if (c.scan.system.decay != 0.0) r.error("system.decay", "solve-phases requires decay 0");
      if (c.scan.sequence.source == SequenceSource::Single) {
        r.error("sequence.source", "solve-phases needs a resonant, cap or explicit seed");
      }
      break;
  }
  if (c.experiment == ExperimentKind::MonteCarlo) {
    if (!(c.noise.sigma >= 0.0)) r.error("montecarlo.sigma", "must be >= 0");
    if (c.noise.samples < 1) r.error("montecarlo.samples", "must be >= 1");
  }
  if (c.experiment == ExperimentKind::SolvePhases) {
    if (c.solver.max_iterations < 1) r.error("solver.max_iterations", "must be >= 1");
    if (!(c.solver.phase_tolerance > 0.0)) r.error("solver.phase_tolerance", "must be > 0");
    if (!(c.solver.initial_step > 0.0)) r.error("solver.initial_step", "must be > 0");
  }
  if (c.scan.sequence.source == SequenceSource::Explicit && !c.scan.sequence.alternate &&
      !default_alternation(c.scan.system.detuning)) {
    r.error("sequence.alternate", "required when 0 < |detuning| < 1");
  }
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Simulate:
      return "simulate";
    case ExperimentKind::Scan:
      return "scan";
    case ExperimentKind::Contour:
      return "contour";
    case ExperimentKind::MonteCarlo:
      return "montecarlo";
    case ExperimentKind::Decay:
      return "decay";
    case ExperimentKind::Compensation:
      return "compensation";
    case ExperimentKind::Phases:
      return "phases";
    case ExperimentKind::SolvePhases:
      return "solve-phases";
  }
  return "?";
}

std::optional<ExperimentKind> parse_experiment(const std::string& name) {
  for (auto k : {ExperimentKind::Simulate, ExperimentKind::Scan, ExperimentKind::Contour,
                 ExperimentKind::MonteCarlo, ExperimentKind::Decay, ExperimentKind::Compensation,
                 ExperimentKind::Phases, ExperimentKind::SolvePhases}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

ParseResult parse_config(const std::string& text, std::optional<ExperimentKind> expected) {
  ParseResult result;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    result.errors.push_back(std::string("<document>: ") + e.what());
    return result;
  }

  Reader r(result.errors);
  if (!r.object(j, "", {"experiment", "pulse", "system", "sequence", "grid", "integrator",
                        "montecarlo", "seed", "compensation", "solver", "regime", "output"})) {
    return result;
  }

  RunConfig c;
  if (expected) c.experiment = *expected;
  if (auto name = r.string(j, "", "experiment")) {
    if (auto kind = parse_experiment(*name)) {
      if (expected && *kind != *expected) {
        r.error("experiment", "config is for \"" + *name + "\" but the subcommand is \"" +
                                  to_string(*expected) + "\"");
      }
      c.experiment = *kind;
    } else {
      r.error("experiment", "unknown experiment \"" + *name + "\"");
    }
  }

  if (j.contains("pulse")) read_pulse(r, j.at("pulse"), c.scan.pulse);
  if (j.contains("system") && r.object(j.at("system"), "system", {"detuning", "decay"})) {
    r.real(j.at("system"), "system", "detuning", c.scan.system.detuning);
    r.real(j.at("system"), "system", "decay", c.scan.system.decay);
  }
  if (j.contains("sequence")) read_sequence(r, j.at("sequence"), c.scan.sequence);
  if (j.contains("grid")) read_grid(r, j.at("grid"), c.scan.axes);
  if (j.contains("integrator") &&
      r.object(j.at("integrator"), "integrator", {"rtol", "atol", "max_steps"})) {
    const json& ji = j.at("integrator");
    r.real(ji, "integrator", "rtol", c.scan.integrator.rtol);
    r.real(ji, "integrator", "atol", c.scan.integrator.atol);
    if (ji.contains("max_steps")) {
      if (ji.at("max_steps").is_number_unsigned()) {
        c.scan.integrator.max_steps = ji.at("max_steps").get<std::size_t>();
      } else {
        r.error("integrator.max_steps", "expected a positive integer");
      }
    }
    if (!(c.scan.integrator.rtol > 0.0)) r.error("integrator.rtol", "must be > 0");
    if (!(c.scan.integrator.atol >= 0.0)) r.error("integrator.atol", "must be >= 0");
  }
  if (j.contains("montecarlo") &&
      r.object(j.at("montecarlo"), "montecarlo", {"sigma", "samples"})) {
    r.real(j.at("montecarlo"), "montecarlo", "sigma", c.noise.sigma);
    r.integer(j.at("montecarlo"), "montecarlo", "samples", c.noise.samples);
  }
  if (j.contains("seed")) {
    if (j.at("seed").is_number_unsigned()) {
      c.noise.seed = j.at("seed").get<std::uint64_t>();
    } else {
      r.error("seed", "expected a non-negative integer");
    }
  }
  if (j.contains("compensation") &&
      r.object(j.at("compensation"), "compensation",
               {"gammas", "threshold", "peak_min", "peak_max", "peak_step", "resolution"})) {
    const json& jc = j.at("compensation");
    r.reals(jc, "compensation", "gammas", c.compensation.gammas);
    r.real(jc, "compensation", "threshold", c.compensation.threshold);
    r.real(jc, "compensation", "peak_min", c.compensation.peak_min);
    r.real(jc, "compensation", "peak_max", c.compensation.peak_max);
    r.real(jc, "compensation", "peak_step", c.compensation.peak_step);
    r.real(jc, "compensation", "resolution", c.compensation.resolution);
  }
  if (j.contains("solver") &&
      r.object(j.at("solver"), "solver", {"max_iterations", "phase_tolerance", "initial_step"})) {
    r.integer(j.at("solver"), "solver", "max_iterations", c.solver.max_iterations);
    r.real(j.at("solver"), "solver", "phase_tolerance", c.solver.phase_tolerance);
    r.real(j.at("solver"), "solver", "initial_step", c.solver.initial_step);
  }
  if (auto regime = r.string(j, "", "regime")) {
    if (*regime == "resonant") {
      c.regime = PhaseRegime::Resonant;
    } else if (*regime == "cap") {
      c.regime = PhaseRegime::FarOffResonant;
    } else {
      r.error("regime", "expected \"resonant\" or \"cap\"");
    }
  }
  if (auto out = r.string(j, "", "output")) c.output = *out;

  // Field-level checks, each under its own key.
  const SequenceSpec& seq = c.scan.sequence;
  if (seq.n < 1 || seq.n % 2 == 0) r.error("sequence.n", "N must be odd");
  if (seq.source == SequenceSource::Single && seq.n != 1) {
    r.error("sequence.n", "a single pair needs N = 1");
  }
  if (seq.source == SequenceSource::Explicit &&
      (seq.pump_phases.size() != static_cast<std::size_t>(seq.n) ||
       seq.stokes_phases.size() != static_cast<std::size_t>(seq.n))) {
    r.error("sequence", "explicit phases need N entries in pump_phases and stokes_phases");
  }
  if (!(seq.gap >= 0.0)) r.error("sequence.gap", "must be >= 0");
  if (!(c.scan.system.decay >= 0.0)) r.error("system.decay", "must be >= 0");
  check(r, "pulse", [&] { c.scan.pulse.build(); });
  c.scan.pulse.delay = c.scan.pulse.resolved_delay();
  c.solver.gap = seq.gap;
  c.solver.integrator = c.scan.integrator;
  validate_experiment(r, c);

  if (result.errors.empty()) result.config = std::move(c);
  return result;
}

std::string serialize_config(const RunConfig& c) {
  json j;
  j["experiment"] = to_string(c.experiment);
  const PulseTemplate& p = c.scan.pulse;
  j["pulse"] = {{"shape", shape_name(p.kind)}, {"peak", p.peak}, {"width", p.width}};
  j["pulse"]["delay"] = p.delay ? json(*p.delay) : json(nullptr);
  j["system"] = {{"detuning", c.scan.system.detuning}, {"decay", c.scan.system.decay}};
  const SequenceSpec& s = c.scan.sequence;
  j["sequence"] = {{"source", source_name(s.source)},
                   {"n", s.n},
                   {"pump_phases", s.pump_phases},
                   {"stokes_phases", s.stokes_phases},
                   {"gap", s.gap}};
  j["sequence"]["alternate"] = s.alternate ? json(*s.alternate) : json(nullptr);
  j["grid"] = json::array();
  for (const Axis& a : c.scan.axes) {
    j["grid"].push_back({{"parameter", to_string(a.parameter)},
                         {"min", a.min},
                         {"max", a.max},
                         {"points", a.points},
                         {"spacing", a.spacing == Spacing::Linear ? "linear" : "log"}});
  }
  j["integrator"] = {{"rtol", c.scan.integrator.rtol},
                     {"atol", c.scan.integrator.atol},
                     {"max_steps", c.scan.integrator.max_steps}};
  j["montecarlo"] = {{"sigma", c.noise.sigma}, {"samples", c.noise.samples}};
  j["seed"] = c.noise.seed;
  const CompensationSpec& cs = c.compensation;
  j["compensation"] = {{"gammas", cs.gammas},       {"threshold", cs.threshold},
                       {"peak_min", cs.peak_min},   {"peak_max", cs.peak_max},
                       {"peak_step", cs.peak_step}, {"resolution", cs.resolution}};
  j["solver"] = {{"max_iterations", c.solver.max_iterations},
                 {"phase_tolerance", c.solver.phase_tolerance},
                 {"initial_step", c.solver.initial_step}};
  j["regime"] = c.regime == PhaseRegime::Resonant ? "resonant" : "cap";
  j["output"] = c.output;
  return j.dump(2);
}

std::string config_hash(const RunConfig& config) {
  RunConfig canonical = config;
  canonical.output.clear();
  const std::string text = serialize_config(canonical);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_table(std::ostream& out, const std::vector<std::string>& axis_names,
                 const std::vector<FidelityResult>& results, const std::string& hash,
                 bool with_sem) {
  for (const auto& name : axis_names) out << name << ",";
  out << "P1,P2,P3,infidelity,norm_loss";
  if (with_sem) out << ",infidelity_sem";
  out << "\n";
  std::vector<std::string> failures;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const FidelityResult& r = results[i];
    for (double c : r.coords) out << format_real(c) << ",";
    out << format_real(r.p1) << "," << format_real(r.p2) << "," << format_real(r.p3) << ","
        << format_real(r.infidelity) << "," << format_real(r.norm_loss);
    if (with_sem) out << "," << format_real(r.infidelity_sem);
    out << "\n";
    if (!r.ok()) failures.push_back("# row " + std::to_string(i) + " failed: " + r.error);
  }
  for (const auto& f : failures) out << f << "\n";
  out << "# config_hash=" << hash << "\n";
}

void emit_table(const std::string& path, const std::vector<std::string>& axis_names,
                const std::vector<FidelityResult>& results, const std::string& hash,
                bool with_sem) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  write_table(file, axis_names, results, hash, with_sem);
  if (!file) throw std::runtime_error("failed writing output file: " + path);
}

void write_compensation(std::ostream& out, const CompensationResult& result,
                        const std::string& hash) {
  out << "decay,required_peak\n";
  for (const auto& row : result.rows) {
    out << format_real(row.gamma) << ","
        << (row.required_peak ? format_real(*row.required_peak) : std::string("nan")) << "\n";
  }
  for (const auto& row : result.rows) {
    if (!row.note.empty()) out << "# decay " << format_real(row.gamma) << ": " << row.note << "\n";
  }
  out << "# exponent=" << (result.exponent ? format_real(*result.exponent) : "nan") << "\n";
  out << "# config_hash=" << hash << "\n";
}

void write_phase_solution(std::ostream& out, const PhaseSolution& s, const std::string& hash) {
  out << "k,pump_phase,stokes_phase\n";
  for (std::size_t k = 0; k < s.sequence.pump_phases.size(); ++k) {
    out << k + 1 << "," << format_real(s.sequence.pump_phases[k]) << ","
        << format_real(s.sequence.stokes_phases[k]) << "\n";
  }
  out << "# alternate=" << (s.sequence.alternate_ordering ? "true" : "false") << "\n";
  out << "# seed_infidelity=" << format_real(s.seed_infidelity) << "\n";
  out << "# infidelity=" << format_real(s.infidelity) << "\n";
  out << "# iterations=" << s.iterations << " converged=" << (s.converged ? "true" : "false")
      << "\n";
  out << "# config_hash=" << hash << "\n";
}

namespace {

std::vector<std::string> axis_names(const ScanSpec& scan) {
  std::vector<std::string> names;
  for (const auto& a : scan.axes) names.push_back(to_string(a.parameter));
  return names;
}

RunStatus status_of(const std::vector<FidelityResult>& rows) {
  for (const auto& r : rows) {
    if (!r.ok()) return RunStatus::NumericalFailure;
  }
  return RunStatus::Ok;
}

}  // namespace

RunStatus run_experiment(const RunConfig& cfg, std::ostream& out, int threads) {
  const std::string hash = config_hash(cfg);
  switch (cfg.experiment) {
    case ExperimentKind::Simulate:
    case ExperimentKind::Scan:
    case ExperimentKind::Contour:
    case ExperimentKind::Decay: {
      const auto rows = run_scan(cfg.scan, threads);
      write_table(out, axis_names(cfg.scan), rows, hash);
      return status_of(rows);
    }
    case ExperimentKind::MonteCarlo: {
      const auto rows = monte_carlo_phase_noise(cfg.scan, cfg.noise, threads);
      write_table(out, axis_names(cfg.scan), rows, hash, true);
      return status_of(rows);
    }
    case ExperimentKind::Compensation: {
      const auto result = decay_compensation_check(cfg.scan, cfg.compensation, threads);
      write_compensation(out, result, hash);
      for (const auto& row : result.rows) {
        if (!row.required_peak) return RunStatus::NumericalFailure;
      }
      return RunStatus::Ok;
    }
    case ExperimentKind::Phases:
      out << print_phases(cfg.scan.sequence.n, cfg.regime) << "\n";
      return RunStatus::Ok;
    case ExperimentKind::SolvePhases: {
      const CompositeSequence seed = cfg.scan.sequence.build(cfg.scan.system.detuning);
      const PhaseSolution sol =
          solve_phases(cfg.scan.pulse.build(), cfg.scan.system, seed, cfg.solver);
      write_phase_solution(out, sol, hash);
      return RunStatus::Ok;
    }
  }
  return RunStatus::Ok;
}

std::string print_phases(int n, PhaseRegime regime) { return format_phase_table(regime, n); }

}  // namespace cstirap
