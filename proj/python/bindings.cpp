#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "optad/model.hpp"
#include "optad/multi_solver.hpp"
#include "optad/oracle.hpp"
#include "optad/single_solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace optad;

namespace {

Vector to_vector(const std::vector<double>& v) {
  Vector out(static_cast<long>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) out[static_cast<long>(i)] = v[i];
  return out;
}

std::vector<double> from_vector(const Vector& v) {
  return {v.data(), v.data() + v.size()};
}

Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw ValidationError("matrix needs at least one row");
  Matrix m(static_cast<long>(rows.size()), static_cast<long>(rows[0].size()));
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size())
      throw ValidationError("matrix rows must have equal lengths");
    for (size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<long>(r), static_cast<long>(c)) = rows[r][c];
  }
  return m;
}

LambdaMode parse_mode(const std::string& mode) {
  if (mode == "subsets") return LambdaMode::Subsets;
  if (mode == "intervals") return LambdaMode::Intervals;
  throw ValidationError("lambda mode must be 'subsets' or 'intervals'");
}

}  // namespace

PYBIND11_MODULE(_optad, m) {
  m.doc() = "Revenue-optimal advertising rules for information products";

  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);
  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_RuntimeError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::class_<DecisionProblem>(m, "DecisionProblem")
      .def(py::init([](const std::vector<std::vector<double>>& utility) {
             return DecisionProblem::validated(to_matrix(utility));
           }),
           py::arg("utility"))
      .def_readonly("n_states", &DecisionProblem::n_states)
      .def_readonly("n_actions", &DecisionProblem::n_actions)
      .def_property_readonly("utility", [](const DecisionProblem& p) {
        std::vector<std::vector<double>> rows;
        for (int w = 0; w < p.n_states; ++w)
          rows.push_back(from_vector(p.utility.row(w).transpose()));
        return rows;
      });

  py::class_<Belief>(m, "Belief")
      .def(py::init([](const std::vector<double>& probs) {
             return Belief::simplex(to_vector(probs));
           }),
           py::arg("probs"))
      .def_property_readonly(
          "probs", [](const Belief& b) { return from_vector(b.probs); })
      .def("__len__", &Belief::size);

  py::class_<SingleTypeInstance>(m, "SingleTypeInstance")
      .def(py::init([](const DecisionProblem& problem,
                       const std::vector<double>& mu,
                       const std::vector<double>& theta,
                       std::optional<std::vector<double>> linear_cost) {
             std::optional<Vector> lc;
             if (linear_cost) lc = to_vector(*linear_cost);
             return SingleTypeInstance::validated(
                 problem, Belief::simplex(to_vector(mu)),
                 Belief::full_support(to_vector(theta)), std::move(lc));
           }),
           py::arg("problem"), py::arg("mu"), py::arg("theta"),
           py::arg("linear_cost") = std::nullopt)
      .def_readonly("problem", &SingleTypeInstance::problem)
      .def_readonly("mu", &SingleTypeInstance::mu)
      .def_readonly("theta", &SingleTypeInstance::theta);

  py::class_<MultiTypeInstance>(m, "MultiTypeInstance")
      .def(py::init([](const DecisionProblem& problem,
                       const std::vector<std::vector<double>>& types,
                       const std::vector<std::vector<double>>& joint) {
             std::vector<Belief> beliefs;
             for (const auto& t : types)
               beliefs.push_back(Belief::full_support(to_vector(t)));
             return MultiTypeInstance::validated(problem, std::move(beliefs),
                                                 to_matrix(joint));
           }),
           py::arg("problem"), py::arg("types"), py::arg("joint"))
      .def_readonly("problem", &MultiTypeInstance::problem)
      .def_property_readonly("n_types", &MultiTypeInstance::n_types);

  py::class_<SignalEntry>(m, "SignalEntry")
      .def(py::init([](const std::vector<double>& pi, double price) {
             SignalEntry e;
             e.pi_given_omega = to_vector(pi);
             e.price = price;
             return e;
           }),
           py::arg("pi_given_omega"), py::arg("price"))
      .def_property_readonly(
          "pi_given_omega",
          [](const SignalEntry& e) { return from_vector(e.pi_given_omega); })
      .def_readonly("price", &SignalEntry::price);

  py::class_<AdvertisingRule>(m, "AdvertisingRule")
      .def(py::init([](const std::vector<SignalEntry>& signals) {
             return AdvertisingRule::validated(signals);
           }),
           py::arg("signals"))
      .def_readonly("signals", &AdvertisingRule::signals)
      .def("__len__", &AdvertisingRule::n_signals);

  py::class_<DecompositionPart>(m, "DecompositionPart")
      .def_readonly("phi", &DecompositionPart::phi)
      .def_readonly("eta", &DecompositionPart::eta);

  py::class_<PosteriorDecomposition>(m, "PosteriorDecomposition")
      .def(py::init([](const std::vector<std::pair<double, std::vector<double>>>&
                           parts) {
             PosteriorDecomposition d;
             for (const auto& [phi, eta] : parts)
               d.parts.push_back({phi, Belief::simplex(to_vector(eta))});
             return d;
           }),
           py::arg("parts"))
      .def_readonly("parts", &PosteriorDecomposition::parts)
      .def("__len__", &PosteriorDecomposition::n_parts);

  py::class_<SolveDiagnostics>(m, "SolveDiagnostics")
      .def_readonly("status", &SolveDiagnostics::status)
      .def_readonly("iterations", &SolveDiagnostics::iterations)
      .def_readonly("max_constraint_violation",
                    &SolveDiagnostics::max_constraint_violation)
      .def_readonly("certified_gap", &SolveDiagnostics::certified_gap)
      .def_readonly("merge_flags", &SolveDiagnostics::merge_flags)
      .def_readonly("sparsity_flags", &SolveDiagnostics::sparsity_flags);

  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("revenue", &SolveReport::revenue)
      .def_readonly("decomposition", &SolveReport::decomposition)
      .def_readonly("rule", &SolveReport::rule)
      .def_readonly("diagnostics", &SolveReport::diagnostics);

  py::class_<LambdaCandidate>(m, "LambdaCandidate")
      .def(py::init([](const std::vector<int>& members) {
             LambdaCandidate c;
             c.members = members;
             return c;
           }),
           py::arg("members"))
      .def_readonly("members", &LambdaCandidate::members);

  py::class_<MultiSolveReport>(m, "MultiSolveReport")
      .def_readonly("lp_value", &MultiSolveReport::lp_value)
      .def_readonly("rule", &MultiSolveReport::rule)
      .def_readonly("realized_revenue", &MultiSolveReport::realized_revenue)
      .def_readonly("reoptimized_rule", &MultiSolveReport::reoptimized_rule)
      .def_readonly("reoptimized_revenue",
                    &MultiSolveReport::reoptimized_revenue)
      .def_readonly("status", &MultiSolveReport::status);

  py::class_<Prospect>(m, "Prospect")
      .def(py::init([](double p, double profit, double value) {
             return Prospect{p, profit, value};
           }),
           py::arg("probability"), py::arg("profit"), py::arg("value"))
      .def_readonly("probability", &Prospect::probability)
      .def_readonly("profit", &Prospect::profit)
      .def_readonly("value", &Prospect::value);

  py::class_<DisclosureConversion>(m, "DisclosureConversion")
      .def_readonly("instance", &DisclosureConversion::instance)
      .def_readonly("scale", &DisclosureConversion::scale);

  m.def("best_action", &best_action, py::arg("problem"), py::arg("eta"));
  m.def("cost_of_uncertainty", &cost_of_uncertainty, py::arg("problem"),
        py::arg("eta"));
  m.def(
      "likelihood_ratio",
      [](const Belief& mu, const Belief& theta, const Belief& eta) {
        return likelihood_ratio(mu, theta, eta);
      },
      py::arg("mu"), py::arg("theta"), py::arg("eta"));
  m.def("posterior", &posterior, py::arg("theta"), py::arg("rule"),
        py::arg("signal_index"));
  m.def("evaluate_rule_single", &evaluate_rule_single, py::arg("instance"),
        py::arg("rule"));
  m.def("evaluate_rule_multi", &evaluate_rule_multi, py::arg("instance"),
        py::arg("rule"));
  m.def("decomposition_to_rule", &decomposition_to_rule, py::arg("instance"),
        py::arg("decomposition"));
  m.def("rule_to_decomposition", &rule_to_decomposition, py::arg("instance"),
        py::arg("rule"));
  m.def("decomposition_revenue", &decomposition_revenue, py::arg("instance"),
        py::arg("decomposition"));
  m.def("convert_disclosure", &convert_disclosure, py::arg("prospects"));

  m.def(
      "solve_concave_closure",
      [](const SingleTypeInstance& inst) { return solve_concave_closure(inst); },
      py::arg("instance"));
  m.def("solve_binary", &solve_binary, py::arg("instance"));
  m.def("no_disclosure_revenue", &no_disclosure_revenue, py::arg("instance"));
  m.def("reduce_signals", &reduce_signals, py::arg("instance"),
        py::arg("decomposition"));
  m.def("merge_gain", &merge_gain, py::arg("instance"), py::arg("decomposition"),
        py::arg("s_index"), py::arg("t_index"));
  m.def("common_prior_decomposition", &common_prior_decomposition,
        py::arg("instance"));

  m.def(
      "enumerate_lambda_candidates",
      [](const MultiTypeInstance& inst, const std::string& mode,
         int subsets_cap) {
        return enumerate_lambda_candidates(inst, parse_mode(mode), subsets_cap);
      },
      py::arg("instance"), py::arg("mode"), py::arg("subsets_cap") = 16);
  m.def("solve_grid_lp", &solve_grid_lp, py::arg("instance"),
        py::arg("epsilon"), py::arg("candidates"));
  m.def("realized_purchase_set", &realized_purchase_set, py::arg("instance"),
        py::arg("rule"), py::arg("signal_index"));
  m.def("merge_duplicate_signals", &merge_duplicate_signals,
        py::arg("instance"), py::arg("rule"));

  m.def(
      "grid_concave_closure",
      [](const SingleTypeInstance& inst, int resolution) {
        return grid_concave_closure(inst, resolution);
      },
      py::arg("instance"), py::arg("resolution"));
  m.def("brute_force_multi", &brute_force_multi, py::arg("instance"),
        py::arg("n_signals"), py::arg("grid_resolution"));
}
