#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tsqc/cli.hpp"
#include "tsqc/io.hpp"

namespace py = pybind11;
using namespace tsqc;

namespace {

py::dict labeled(std::span<const LabeledValue> entries) {
  py::dict d;
  for (const auto& e : entries) d[py::str(e.label)] = e.value;
  return d;
}

py::object from_json(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

std::vector<std::vector<Complex>> rows(const Matrix& m) {
  std::vector<std::vector<Complex>> out(m.dim(), std::vector<Complex>(m.dim()));
  for (std::size_t r = 0; r < m.dim(); ++r) {
    for (std::size_t c = 0; c < m.dim(); ++c) out[r][c] = m(r, c);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Time-symmetric quantum counterfactual probabilities with a Monte Carlo postselection oracle.";
  m.attr("__version__") = std::string(kToolVersion);
  m.attr("generator") = std::string(SplitMix64::algorithm_id);

  py::register_exception<Error>(m, "TsqcError", PyExc_ValueError);

  py::class_<Ket>(m, "Ket")
      .def(py::init([](std::vector<Complex> amp, bool strict) {
             return Ket(std::move(amp), strict ? Ket::Normalization::strict : Ket::Normalization::automatic);
           }),
           py::arg("amplitudes"), py::arg("strict") = false)
      .def_static("basis", &Ket::basis, py::arg("dim"), py::arg("index"))
      .def_property_readonly("dim", &Ket::dim)
      .def_property_readonly("amplitudes",
                             [](const Ket& k) { return std::vector<Complex>(k.amplitudes().begin(), k.amplitudes().end()); })
      .def_property_readonly("applied_scale", &Ket::applied_scale)
      .def("__repr__", [](const Ket& k) { return "<Ket dim=" + std::to_string(k.dim()) + ">"; });

  m.def("inner", py::overload_cast<const Ket&, const Ket&>(&inner), py::arg("x"), py::arg("y"));

  py::class_<ProjectiveMeasurement>(m, "Measurement")
      .def_static(
          "from_basis",
          [](std::string name, const std::vector<Ket>& basis, const std::vector<std::string>& labels) {
            return ProjectiveMeasurement::from_basis(std::move(name), basis, labels);
          },
          py::arg("name"), py::arg("basis"), py::arg("labels"))
      .def_static(
          "from_partition",
          [](std::string name, const std::vector<Ket>& basis,
             const std::vector<std::pair<std::string, std::vector<std::size_t>>>& groups) {
            std::vector<ProjectiveMeasurement::Group> gs;
            for (const auto& [label, members] : groups) gs.push_back({label, members});
            return ProjectiveMeasurement::from_partition(std::move(name), basis, gs);
          },
          py::arg("name"), py::arg("basis"), py::arg("groups"))
      .def_property_readonly("name", &ProjectiveMeasurement::name)
      .def_property_readonly("dim", &ProjectiveMeasurement::dim)
      .def_property_readonly("labels", &ProjectiveMeasurement::labels)
      .def_property_readonly("is_valid", &ProjectiveMeasurement::is_valid)
      .def("validation", [](const ProjectiveMeasurement& pm) {
        py::list out;
        for (const auto& v : pm.validation().violations) {
          out.append(py::dict(py::arg("invariant") = v.invariant, py::arg("subject") = v.subject,
                              py::arg("deviation") = v.deviation));
        }
        return out;
      });

  py::class_<TwoState>(m, "TwoState")
      .def(py::init<Ket, Ket, double, double>(), py::arg("pre"), py::arg("post"), py::arg("t_a") = 0.0,
           py::arg("t_b") = 1.0)
      .def_property_readonly("pre", &TwoState::pre)
      .def_property_readonly("post", &TwoState::post)
      .def("reversed", &TwoState::reversed);

  m.def("born_predictive", [](const Ket& a, const ProjectiveMeasurement& pm) {
    return labeled(born_predictive(a, pm).entries());
  });
  m.def("born_retrodictive", [](const Ket& b, const ProjectiveMeasurement& pm) {
    return labeled(born_retrodictive(b, pm).entries());
  });
  m.def("abl", [](const TwoState& ts, const ProjectiveMeasurement& pm) { return labeled(abl(ts, pm).entries()); });
  m.def("kastner_rule", [](const TwoState& ts, const ProjectiveMeasurement& pm) {
    const auto w = kastner_rule(ts, pm);
    return py::make_tuple(labeled(w.entries), w.normalized);
  });
  m.def("mixture_at_t", [](const Ket& a, const ProjectiveMeasurement& pm) { return rows(mixture_at_t(a, pm).matrix()); });

  py::class_<Scenario>(m, "Scenario")
      .def_readonly("name", &Scenario::name)
      .def_readonly("two_state", &Scenario::two_state)
      .def_readonly("candidates", &Scenario::candidates)
      .def_readonly("final_measurement", &Scenario::final_measurement)
      .def_readonly("b_label", &Scenario::b_label)
      .def("to_json", [](const Scenario& s) { return from_json(scenario_to_json(s)); });

  m.def("three_holes", &three_holes);
  m.def("random_scenario", &random_scenario, py::arg("dim"), py::arg("seed"));
  m.def("load_scenario", [](const std::string& path) { return load_scenario(path); }, py::arg("path"));
  m.def("parse_scenario", [](const std::string& text) { return parse_scenario(text); }, py::arg("text"));

  m.def(
      "counterfactual_report",
      [](const Scenario& s, std::uint64_t trials, std::uint64_t seed, double k_sigma, unsigned workers) {
        const EnsembleConfig cfg{trials, seed, SelectionMode::pre_and_postselected, workers};
        CounterfactualReport rep;
        {
          py::gil_scoped_release release;
          rep = counterfactual_report(s, cfg, k_sigma);
        }
        return from_json(report_to_json(ReportDocument{std::string(kToolVersion), utc_timestamp(), {}, rep}));
      },
      py::arg("scenario"), py::arg("trials") = 100000, py::arg("seed") = 0, py::arg("k_sigma") = 5.0,
      py::arg("workers") = 1);

  m.def(
      "run_pre_post_selected",
      [](const Ket& a, const ProjectiveMeasurement& pm, const ProjectiveMeasurement& fin, const std::string& b_label,
         std::uint64_t trials, std::uint64_t seed, unsigned workers) {
        const EnsembleConfig cfg{trials, seed, SelectionMode::pre_and_postselected, workers};
        return from_json(ensemble_to_json(run_pre_post_selected(a, pm, fin, b_label, cfg)));
      },
      py::arg("pre"), py::arg("measurement"), py::arg("final"), py::arg("b_label"), py::arg("trials") = 100000,
      py::arg("seed") = 0, py::arg("workers") = 1);

  m.def(
      "quantum_raffle",
      [](std::uint64_t coins, bool held, Complex alpha, Complex beta, std::uint64_t seed) {
        RaffleScenario cfg{coins, alpha, beta, held};
        return from_json(raffle_to_json(quantum_raffle(cfg, seed)));
      },
      py::arg("coins"), py::arg("held") = true, py::arg("alpha") = Complex(1.0 / std::numbers::sqrt2),
      py::arg("beta") = Complex(1.0 / std::numbers::sqrt2), py::arg("seed") = 0);

  m.def(
      "verify",
      [](std::uint64_t seed, std::uint64_t trials, double k_sigma, std::size_t scenarios, bool quick, unsigned workers) {
        cli::VerifyOptions opt{seed, trials, k_sigma, scenarios, workers, quick};
        std::ostringstream out;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = cli::cmd_verify(opt, out);
        }
        return py::make_tuple(code, out.str());
      },
      py::arg("seed"), py::arg("trials") = 100000, py::arg("k_sigma") = 5.0, py::arg("scenarios") = 100,
      py::arg("quick") = false, py::arg("workers") = 1);
}
