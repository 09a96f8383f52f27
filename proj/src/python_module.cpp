#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sqrac/cli.hpp"
#include "sqrac/error.hpp"
#include "sqrac/optimizer.hpp"
#include "sqrac/randomness.hpp"
#include "sqrac/scenario.hpp"
#include "sqrac/strategy_io.hpp"
#include "sqrac/witnesses.hpp"

namespace py = pybind11;
using namespace sqrac;

namespace {

py::tuple pair(const WitnessPair& w) { return py::make_tuple(w.a_ab, w.a_ac); }

py::dict frontier_dict(const ClassicalFrontier& f) {
  py::list pareto, hull;
  for (const auto& w : f.pareto) pareto.append(pair(w));
  for (const auto& w : f.hull) hull.append(pair(w));
  py::dict d;
  d["max_ab"] = f.max_ab;
  d["max_ac"] = f.max_ac;
  d["joint_max"] = f.joint_max;
  d["pareto"] = pareto;
  d["hull"] = hull;
  d["achievable"] = f.achievable.size();
  return d;
}

}  // namespace

PYBIND11_MODULE(sqrac, m) {
  m.doc() = "Sequential 3->1 quantum random access codes with a single qubit";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<InfeasibleInput>(m, "InfeasibleInput", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<UnreachableOutcome>(m, "UnreachableOutcome", PyExc_RuntimeError);

  m.attr("QUANTUM_MAX") = kQuantumMax;
  m.attr("CLASSICAL_MAX") = kClassicalMax;

  m.def("tradeoff_bound", &tradeoff_bound, py::arg("a_ab"));
  m.def("ab_from_eta", &ab_from_eta, py::arg("eta"));
  m.def("ac_from_eta", &ac_from_eta, py::arg("eta"));
  m.def(
      "ideal_witnesses", [](double eta) { return pair(witnesses(ideal_strategy(eta))); }, py::arg("eta"),
      "(A_AB, A_AC) simulated for the ideal unsharp family");
  m.def(
      "random_witnesses",
      [](std::uint64_t seed) { return pair(witnesses(random_strategy(seed, RandomMode::kGeneral))); },
      py::arg("seed"));
  m.def(
      "ideal_strategy_json", [](double eta) { return strategy_to_json(ideal_strategy(eta)); }, py::arg("eta"));
  m.def(
      "random_strategy_json",
      [](std::uint64_t seed) { return strategy_to_json(random_strategy(seed, RandomMode::kGeneral)); },
      py::arg("seed"));
  m.def(
      "strategy_witnesses", [](const std::string& text) { return pair(witnesses(strategy_from_json(text))); },
      py::arg("json"));
  m.def(
      "certify",
      [](double a_ab, double a_ac) {
        const CertInterval c = certify(a_ab, a_ac);
        py::dict d;
        d["eta_lo"] = c.eta_lo;
        d["eta_hi"] = c.eta_hi;
        d["lo_nontrivial"] = c.lo_nontrivial;
        d["hi_nontrivial"] = c.hi_nontrivial;
        return d;
      },
      py::arg("a_ab"), py::arg("a_ac"));
  m.def(
      "selftest", [](const std::string& text) { return cli::selftest_report(strategy_from_json(text)); },
      py::arg("json"), "JSON self-test report");
  m.def(
      "classical_frontier", [] { return frontier_dict(classical_frontier()); });
  m.def(
      "sequential_chain",
      [](int k) {
        py::list out;
        for (const ChainStep& s : sequential_chain(k))
          out.append(py::make_tuple(s.decoder, s.guessing, s.closed_form, s.bloch_length));
        return out;
      },
      py::arg("k"), "(decoder, simulated, closed form, Bloch length) per step");
  m.def(
      "maximize_ac",
      [](double target, std::uint64_t budget, const std::string& mode, std::uint64_t seed, int starts, int threads) {
        if (mode != "param" && mode != "general") throw DomainError("mode must be 'param' or 'general'");
        SearchOptions o;
        o.seed = seed;
        o.starts = starts;
        o.threads = threads;
        FrontierResult r;
        {
          py::gil_scoped_release release;
          r = maximize_ac(target, budget, mode == "param" ? SearchMode::kParam : SearchMode::kGeneral, o);
        }
        py::dict d;
        d["bound"] = r.bound;
        d["best_ac"] = r.best_ac;
        d["achieved_ab"] = r.achieved_ab;
        d["realized"] = pair(r.realized);
        d["evaluations"] = r.evaluations;
        d["seed"] = r.seed;
        d["argmax"] = strategy_to_json(r.argmax);
        return d;
      },
      py::arg("target"), py::arg("budget") = 100000, py::arg("mode") = "param", py::arg("seed") = 1,
      py::arg("starts") = 64, py::arg("threads") = 0);

  m.def("w_ab", &w_ab, py::arg("eta"));
  m.def("w_ac", &w_ac, py::arg("eta"));
  m.def("hmin_w", &hmin_w, py::arg("w"));
  m.def("hmin_t2", &hmin_t2, py::arg("t"));
  m.def(
      "determinant_witnesses",
      [](double eta) {
        const DeterminantTables t = determinant_experiment(eta);
        return py::make_tuple(determinant_witness(t.bob), determinant_witness(t.charlie));
      },
      py::arg("eta"));
  m.def(
      "t3_witnesses",
      [](double eta) {
        const WitnessValues w = t3_witnesses(eta);
        return py::make_tuple(w.ab, w.ac);
      },
      py::arg("eta"));
  m.def(
      "hmin_t3",
      [](double t, std::uint64_t budget, std::uint64_t seed, int starts) {
        Hmin3Options o;
        o.seed = seed;
        o.starts = starts;
        py::gil_scoped_release release;
        return hmin_t3_numeric(t, budget, o);
      },
      py::arg("t"), py::arg("budget") = 200000, py::arg("seed") = 1, py::arg("starts") = 16);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "(exit code, stdout, stderr) of the command-line front end");
}
