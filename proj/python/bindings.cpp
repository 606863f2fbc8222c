#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cstirap/config.hpp"
#include "cstirap/dynamics.hpp"
#include "cstirap/phases.hpp"
#include "cstirap/propalg.hpp"
#include "cstirap/pulses.hpp"

namespace py = pybind11;
using namespace cstirap;

namespace {

IntegratorOptions tolerances(double rtol, double atol) {
  IntegratorOptions opts;
  opts.rtol = rtol;
  opts.atol = atol;
  return opts;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Composite STIRAP: pulse pairs, propagators and composite phases";

  py::register_exception<IntegrationError>(m, "IntegrationError", PyExc_RuntimeError);

  py::enum_<PulseKind>(m, "PulseKind")
      .value("Gaussian", PulseKind::Gaussian)
      .value("SineSquared", PulseKind::SineSquared);

  py::class_<PulsePair>(m, "PulsePair")
      .def_readonly("delay", &PulsePair::delay)
      .def_readonly("pump_phase", &PulsePair::pump_phase)
      .def_readonly("stokes_phase", &PulsePair::stokes_phase)
      .def_readonly("reversed", &PulsePair::reversed)
      .def_property_readonly("peak", [](const PulsePair& p) { return p.pump.peak; })
      .def_property_readonly("width", [](const PulsePair& p) { return p.pump.width; })
      .def_property_readonly("window", [](const PulsePair& p) { return pair_window(p); });

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init([](double detuning, double decay) {
             SystemParams s{detuning, decay};
             s.validate();
             return s;
           }),
           py::arg("detuning") = 0.0, py::arg("decay") = 0.0)
      .def_readonly("detuning", &SystemParams::detuning)
      .def_readonly("decay", &SystemParams::decay);

  py::class_<CayleyKlein>(m, "CayleyKlein")
      .def(py::init<Complex, Complex>(), py::arg("a"), py::arg("b"))
      .def_readonly("a", &CayleyKlein::a)
      .def_readonly("b", &CayleyKlein::b);

  py::class_<CompositeSequence>(m, "CompositeSequence")
      .def_readonly("n_pairs", &CompositeSequence::n_pairs)
      .def_readonly("pump_phases", &CompositeSequence::pump_phases)
      .def_readonly("stokes_phases", &CompositeSequence::stokes_phases)
      .def_readonly("alternate_ordering", &CompositeSequence::alternate_ordering)
      .def_property_readonly("exact_pump", [](const CompositeSequence& s) {
        return s.exact ? std::optional<std::vector<int>>(s.exact->pump) : std::nullopt;
      })
      .def_property_readonly("exact_stokes", [](const CompositeSequence& s) {
        return s.exact ? std::optional<std::vector<int>>(s.exact->stokes) : std::nullopt;
      });

  m.def(
      "make_pulse_pair",
      [](PulseKind kind, double peak, double width, std::optional<double> delay, double alpha,
         double beta, bool reversed) {
        return make_pulse_pair(kind, peak, width, delay ? *delay : default_delay(kind, width),
                               alpha, beta, reversed);
      },
      py::arg("kind"), py::arg("peak"), py::arg("width") = 1.0, py::arg("delay") = py::none(),
      py::arg("pump_phase") = 0.0, py::arg("stokes_phase") = 0.0, py::arg("reversed") = false);
  m.def("default_delay", &default_delay, py::arg("kind"), py::arg("width") = 1.0);
  m.def("envelope_pair", &pair_envelopes, py::arg("pair"), py::arg("t"),
        "Complex pump and Stokes Rabi frequencies at time t.");

  m.def("hamiltonian", py::overload_cast<const PulsePair&, const SystemParams&, double>(
                           &hamiltonian),
        py::arg("pair"), py::arg("system"), py::arg("t"));
  m.def(
      "propagate",
      [](const PulsePair& pair, const SystemParams& sys, double rtol, double atol) {
        return propagate(pair, sys, tolerances(rtol, atol));
      },
      py::arg("pair"), py::arg("system") = SystemParams{}, py::arg("rtol") = 1e-10,
      py::arg("atol") = 1e-12);
  m.def(
      "propagate_train",
      [](const PulsePair& base, const std::vector<double>& alpha, const std::vector<double>& beta,
         bool alternate, const SystemParams& sys, double gap, double rtol, double atol) {
        const auto train = PulseTrain::back_to_back(base, alpha, beta, alternate, gap);
        return propagate(train, sys, tolerances(rtol, atol));
      },
      py::arg("pair"), py::arg("pump_phases"), py::arg("stokes_phases"), py::arg("alternate"),
      py::arg("system") = SystemParams{}, py::arg("gap") = 0.0, py::arg("rtol") = 1e-10,
      py::arg("atol") = 1e-12, "Direct integration of the back-to-back pulse train.");
  m.def(
      "propagate_two_state",
      [](const PulsePair& pair, double rtol, double atol) {
        return propagate_two_state(pair, SystemParams{}, tolerances(rtol, atol));
      },
      py::arg("pair"), py::arg("rtol") = 1e-10, py::arg("atol") = 1e-12);
  m.def(
      "effective_two_state",
      [](const PulsePair& pair, const SystemParams& sys, double t) {
        const auto e = effective_two_state(pair, sys, t);
        return py::make_tuple(e.coupling, e.detuning);
      },
      py::arg("pair"), py::arg("system"), py::arg("t"));

  m.def("lift_to_three", &lift_to_three, py::arg("ck"));
  m.def("extract_ck", &extract_ck, py::arg("u2"));
  m.def(
      "to_angles",
      [](const CayleyKlein& ck) {
        const auto a = to_angles(ck);
        return py::make_tuple(a.theta, a.phi);
      },
      py::arg("ck"));
  m.def("reverse", &reverse, py::arg("u"));
  m.def("phase_imprint", &phase_imprint, py::arg("u"), py::arg("alpha"), py::arg("beta"));
  m.def(
      "compose_sequence",
      [](const Propagator3& u, const std::vector<double>& alpha, const std::vector<double>& beta,
         bool alternate) { return compose_sequence(u, alpha, beta, alternate); },
      py::arg("u"), py::arg("pump_phases"), py::arg("stokes_phases"), py::arg("alternate"));

  m.def("resonant_phases", &resonant_phases, py::arg("n"));
  m.def("cap_phases", &cap_phases, py::arg("n"));
  m.def(
      "format_phase_table",
      [](int n, bool resonant) {
        return format_phase_table(resonant ? PhaseRegime::Resonant : PhaseRegime::FarOffResonant,
                                  n);
      },
      py::arg("n"), py::arg("resonant") = true);
  m.def(
      "sequence_propagator",
      [](const PulsePair& pair, const CompositeSequence& seq, const SystemParams& sys,
         double gap) { return sequence_propagator(pair, sys, seq, gap); },
      py::arg("pair"), py::arg("sequence"), py::arg("system") = SystemParams{},
      py::arg("gap") = 0.0);
  m.def("transfer_infidelity", &transfer_infidelity, py::arg("u"));
  m.def(
      "solve_phases",
      [](const PulsePair& pair, const SystemParams& sys, const CompositeSequence& seed,
         int max_iterations) {
        SolverOptions opts;
        opts.max_iterations = max_iterations;
        const PhaseSolution s = solve_phases(pair, sys, seed, opts);
        py::dict d;
        d["sequence"] = s.sequence;
        d["infidelity"] = s.infidelity;
        d["seed_infidelity"] = s.seed_infidelity;
        d["iterations"] = s.iterations;
        d["converged"] = s.converged;
        return d;
      },
      py::arg("pair"), py::arg("system"), py::arg("seed"), py::arg("max_iterations") = 2000);

  m.def(
      "run_config",
      [](const std::string& text, int threads) {
        ParseResult parsed = parse_config(text);
        if (!parsed.ok()) {
          std::string msg = "invalid config:";
          for (const auto& e : parsed.errors) msg += "\n  " + e;
          throw py::value_error(msg);
        }
        std::ostringstream out;
        {
          py::gil_scoped_release release;
          run_experiment(*parsed.config, out, threads);
        }
        return out.str();
      },
      py::arg("config_json"), py::arg("threads") = 1,
      "Runs a JSON-configured experiment and returns its CSV output.");
}
