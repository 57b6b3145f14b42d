#include "optad/io.hpp"
#include "optad/model.hpp"
#include "optad/multi_solver.hpp"
#include "optad/oracle.hpp"
#include "optad/single_solver.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <string>

namespace {

using optad::io::Json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;
constexpr int kExitCap = 4;

void emit(const Json& report, const std::string& output_path) {
  std::string text = report.dump(2);
  text.push_back('\n');
  if (output_path.empty())
    std::cout << text;
  else
    optad::io::write_text(output_path, text);
}

Json diagnostics_json(const optad::SolveDiagnostics& d) {
  Json j;
  j["status"] = d.status;
  j["iterations"] = d.iterations;
  j["max_constraint_violation"] = optad::io::rounded(d.max_constraint_violation);
  j["certified_gap"] = optad::io::rounded(d.certified_gap);
  j["merge_flags"] = d.merge_flags;
  j["sparsity_flags"] = d.sparsity_flags;
  j["bases_examined"] = d.enum_stats.bases_examined;
  j["near_singular_skipped"] = d.enum_stats.near_singular_skipped;
  return j;
}

Json solve_single_report(const optad::SingleTypeInstance& instance,
                         std::optional<double> disclosure_scale,
                         bool emit_curve) {
  optad::SolveReport result = instance.problem.n_states == 2
                                  ? optad::solve_binary(instance)
                                  : optad::solve_concave_closure(instance);
  Json report;
  report["kind"] = "single";
  report["revenue"] = optad::io::rounded(result.revenue);
  report["no_disclosure_revenue"] =
      optad::io::rounded(optad::no_disclosure_revenue(instance));
  report["rule"] = optad::io::rule_to_json(result.rule);
  report["decomposition"] = optad::io::decomposition_to_json(result.decomposition);
  report["diagnostics"] = diagnostics_json(result.diagnostics);
  if (disclosure_scale) {
    report["disclosure_scale"] = optad::io::rounded(*disclosure_scale);
    report["sender_payoff"] =
        optad::io::rounded(result.revenue * *disclosure_scale);
  }
  if (emit_curve && instance.problem.n_states == 2) {
    optad::CostModel cost = instance.cost_model();
    const int samples = 257;
    optad::Vector xs(samples), fs(samples);
    for (int i = 0; i < samples; ++i) {
      double x = static_cast<double>(i) / (samples - 1);
      optad::Vector eta(2);
      eta << x, 1.0 - x;
      xs[i] = x;
      fs[i] = optad::likelihood_ratio(instance.mu, instance.theta, eta) *
              cost.cost(eta);
    }
    Json curve;
    curve["eta0"] = optad::io::number_array(xs);
    curve["f"] = optad::io::number_array(fs);
    report["curve"] = std::move(curve);
  }
  return report;
}

std::vector<optad::LambdaCandidate> pick_candidates(
    const optad::MultiTypeInstance& instance, const std::string& mode) {
  if (mode == "subsets")
    return optad::enumerate_lambda_candidates(instance,
                                              optad::LambdaMode::Subsets);
  if (mode == "intervals")
    return optad::enumerate_lambda_candidates(instance,
                                              optad::LambdaMode::Intervals);
  if (mode == "auto") {
    if (instance.problem.n_states == 2)
      return optad::enumerate_lambda_candidates(instance,
                                                optad::LambdaMode::Intervals);
    if (instance.n_types() <= 16)
      return optad::enumerate_lambda_candidates(instance,
                                                optad::LambdaMode::Subsets);
    throw optad::CapExceeded(
        "auto lambda mode needs a binary state space or at most 16 types");
  }
  throw optad::ValidationError("unknown lambda mode: " + mode);
}

Json lambda_json(const optad::LambdaCandidate& lam) {
  Json arr = Json::array();
  for (int t : lam.members) arr.push_back(t);
  return arr;
}

Json solve_multi_report(const optad::MultiTypeInstance& instance,
                        double epsilon, const std::string& lambda_mode) {
  auto candidates = pick_candidates(instance, lambda_mode);
  optad::MultiSolveReport result =
      optad::solve_grid_lp(instance, epsilon, candidates);
  Json report;
  report["kind"] = "multi";
  report["epsilon"] = optad::io::rounded(epsilon);
  report["lp_value"] = optad::io::rounded(result.lp_value);
  report["realized_revenue"] = optad::io::rounded(result.realized_revenue);
  report["rule"] = optad::io::rule_to_json(result.rule);
  Json lambdas = Json::array();
  for (const auto& lam : result.rule_lambdas) lambdas.push_back(lambda_json(lam));
  report["rule_lambdas"] = std::move(lambdas);
  report["reoptimized_revenue"] = optad::io::rounded(result.reoptimized_revenue);
  report["reoptimized_rule"] = optad::io::rule_to_json(result.reoptimized_rule);
  Json diag;
  diag["status"] = result.status;
  diag["lp_iterations"] = result.lp_iterations;
  diag["n_prices"] = static_cast<int>(result.grid.prices.size());
  diag["n_candidates"] = static_cast<int>(result.grid.candidates.size());
  report["diagnostics"] = std::move(diag);
  return report;
}

int cmd_solve(const std::string& path, double epsilon,
              const std::string& lambda_mode, const std::string& output,
              bool emit_curve) {
  optad::io::InstanceFile file = optad::io::load_instance(path);
  Json report;
  if (file.kind == "multi") {
    report = solve_multi_report(*file.multi, epsilon, lambda_mode);
  } else if (file.kind == "single") {
    report = solve_single_report(*file.single, file.disclosure_scale, emit_curve);
  } else {
    optad::DisclosureConversion conv = optad::convert_disclosure(file.prospects);
    report = solve_single_report(conv.instance, conv.scale, emit_curve);
    report["kind"] = "disclosure";
  }
  emit(report, output);
  return kExitOk;
}

int cmd_verify(const std::string& instance_path, const std::string& rule_path,
               double tolerance, const std::string& output) {
  optad::io::InstanceFile file = optad::io::load_instance(instance_path);
  optad::AdvertisingRule rule = optad::io::load_rule(rule_path);
  Json report;
  if (file.kind == "multi") {
    const optad::MultiTypeInstance& inst = *file.multi;
    double revenue = optad::evaluate_rule_multi(inst, rule);
    report["kind"] = "multi";
    report["revenue"] = optad::io::rounded(revenue);
    Json signals = Json::array();
    for (int s = 0; s < rule.n_signals(); ++s) {
      Json sig;
      sig["price"] = optad::io::rounded(rule.signals[s].price);
      sig["purchase_set"] =
          lambda_json(optad::realized_purchase_set(inst, rule, s));
      signals.push_back(std::move(sig));
    }
    report["signals"] = std::move(signals);
  } else {
    optad::SingleTypeInstance inst =
        file.kind == "single"
            ? *file.single
            : optad::convert_disclosure(file.prospects).instance;
    double revenue = optad::evaluate_rule_single(inst, rule);
    report["kind"] = "single";
    report["revenue"] = optad::io::rounded(revenue);
    optad::PosteriorDecomposition decomp =
        optad::rule_to_decomposition(inst, rule);
    report["decomposition"] = optad::io::decomposition_to_json(decomp);
    optad::OptimalityReport opt =
        optad::check_optimality_conditions(inst, decomp);
    Json flags;
    Json merges = Json::array();
    for (auto [s, t] : opt.improving_merges) {
      Json m = Json::array();
      m.push_back(s);
      m.push_back(t);
      merges.push_back(std::move(m));
    }
    flags["improving_merges"] = std::move(merges);
    Json dense = Json::array();
    for (int s : opt.dense_posteriors) dense.push_back(s);
    flags["dense_posteriors"] = std::move(dense);
    report["optimality_flags"] = std::move(flags);

    optad::SolveReport best = inst.problem.n_states == 2
                                  ? optad::solve_binary(inst)
                                  : optad::solve_concave_closure(inst);
    report["solver_revenue"] = optad::io::rounded(best.revenue);
    if (best.revenue > revenue + tolerance)
      report["note"] = "the solver improves on this rule";
  }
  emit(report, output);
  return kExitOk;
}

int cmd_oracle(const std::string& path, int grid_m, int grid_g, int n_signals,
               bool compare, double epsilon, const std::string& lambda_mode,
               double tolerance, const std::string& output) {
  optad::io::InstanceFile file = optad::io::load_instance(path);
  Json report;
  if (file.kind == "multi") {
    const optad::MultiTypeInstance& inst = *file.multi;
    double oracle = optad::brute_force_multi(inst, n_signals, grid_g);
    report["kind"] = "multi";
    report["oracle"] = "brute_force_multi";
    report["signals"] = n_signals;
    report["grid_g"] = grid_g;
    report["oracle_value"] = optad::io::rounded(oracle);
    if (compare) {
      auto candidates = pick_candidates(inst, lambda_mode);
      optad::MultiSolveReport sol =
          optad::solve_grid_lp(inst, epsilon, candidates);
      report["epsilon"] = optad::io::rounded(epsilon);
      report["lp_value"] = optad::io::rounded(sol.lp_value);
      report["realized_revenue"] = optad::io::rounded(sol.realized_revenue);
      // both sides approximate OPT from below; report the bracket
      report["bracket_low"] =
          optad::io::rounded(std::max(oracle, sol.realized_revenue));
      report["bracket_slack"] = optad::io::rounded(epsilon);
    }
  } else {
    optad::SingleTypeInstance inst =
        file.kind == "single"
            ? *file.single
            : optad::convert_disclosure(file.prospects).instance;
    double oracle = optad::grid_concave_closure(inst, grid_m);
    report["kind"] = "single";
    report["oracle"] = "grid_concave_closure";
    report["grid_m"] = grid_m;
    report["oracle_value"] = optad::io::rounded(oracle);
    if (compare) {
      optad::SolveReport sol = optad::solve_concave_closure(inst);
      report["solver_revenue"] = optad::io::rounded(sol.revenue);
      double gap = sol.revenue - oracle;
      report["gap"] = optad::io::rounded(gap);
      report["within_tolerance"] = std::abs(gap) <= tolerance;
    }
  }
  emit(report, output);
  return kExitOk;
}

int cmd_convert_disclosure(const std::string& path, const std::string& output) {
  optad::io::InstanceFile file = optad::io::load_instance(path);
  if (file.kind != "disclosure")
    throw optad::ValidationError("expected a disclosure instance (kind='disclosure')");
  optad::DisclosureConversion conv = optad::convert_disclosure(file.prospects);
  Json doc = optad::io::single_instance_to_json(conv.instance, conv.scale);
  emit(doc, output);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"optimal information-advertising rules: solvers, oracles and "
               "rule verification"};
  app.require_subcommand(1);

  std::string instance_path, rule_path, output;
  double epsilon = 1.0 / 64.0;
  double tolerance = 1e-6;
  std::string lambda_mode = "auto";
  int grid_m = 60, grid_g = 20, n_signals = 2;
  bool compare = false, emit_curve = false;

  CLI::App* solve = app.add_subcommand("solve", "solve an instance file");
  solve->add_option("instance", instance_path, "instance file")->required();
  solve->add_option("--epsilon", epsilon, "price grid step (multi-type)");
  solve->add_option("--lambda-mode", lambda_mode,
                    "subsets|intervals|auto (multi-type)");
  solve->add_option("--output", output, "write the report here");
  solve->add_flag("--emit-curve", emit_curve,
                  "sample f(eta) into the report (binary state)");

  CLI::App* verify =
      app.add_subcommand("verify", "evaluate a rule against an instance");
  verify->add_option("instance", instance_path, "instance file")->required();
  verify->add_option("rule", rule_path, "rule file")->required();
  verify->add_option("--tolerance", tolerance, "improvement-note threshold");
  verify->add_option("--output", output, "write the report here");

  CLI::App* oracle =
      app.add_subcommand("oracle", "run the brute-force reference");
  oracle->add_option("instance", instance_path, "instance file")->required();
  oracle->add_option("--grid-m", grid_m, "simplex grid resolution (single)");
  oracle->add_option("--grid-g", grid_g, "scheme grid resolution (multi)");
  oracle->add_option("--signals", n_signals, "signal count (multi)");
  oracle->add_flag("--compare", compare, "also run the solver");
  oracle->add_option("--epsilon", epsilon, "price grid step for --compare");
  oracle->add_option("--lambda-mode", lambda_mode,
                     "subsets|intervals|auto for --compare");
  oracle->add_option("--tolerance", tolerance, "gap tolerance for --compare");
  oracle->add_option("--output", output, "write the report here");

  CLI::App* convert = app.add_subcommand(
      "convert-disclosure", "rewrite a disclosure problem as an instance");
  convert->add_option("instance", instance_path, "disclosure file")->required();
  convert->add_option("--output", output, "write the instance here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed())
      return cmd_solve(instance_path, epsilon, lambda_mode, output, emit_curve);
    if (verify->parsed())
      return cmd_verify(instance_path, rule_path, tolerance, output);
    if (oracle->parsed())
      return cmd_oracle(instance_path, grid_m, grid_g, n_signals, compare,
                        epsilon, lambda_mode, tolerance, output);
    if (convert->parsed()) return cmd_convert_disclosure(instance_path, output);
  } catch (const optad::CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const optad::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const optad::SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitOk;
}
