#include "optad/multi_solver.hpp"

#include "optad/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace optad {

namespace {

constexpr double kColumnPrune = 1e-14;

std::vector<double> price_grid(double epsilon) {
  if (!(epsilon > 0.0) || epsilon > 1.0)
    throw ValidationError("epsilon must lie in (0, 1]");
  std::vector<double> prices;
  for (int k = 0; k * epsilon <= 1.0 + 1e-12; ++k)
    prices.push_back(std::min(k * epsilon, 1.0));
  if (prices.back() < 1.0 - 1e-12) prices.push_back(1.0);
  return prices;
}

// per-signal purchase constraints: for each (theta in Lambda, action a)
//   sum_omega theta_omega pi(omega, s) (u*(omega) - u(omega, a) - p) >= 0
std::vector<Vector> purchase_rows(const MultiTypeInstance& instance,
                                  const LambdaCandidate& lambda, double price) {
  const int n = instance.problem.n_states;
  Vector best = instance.problem.best_utility();
  std::vector<Vector> rows;
  for (int t : lambda.members) {
    const Vector& theta = instance.types[t].probs;
    for (int a = 0; a < instance.problem.n_actions; ++a) {
      Vector row(n);
      for (int w = 0; w < n; ++w)
        row[w] = theta[w] * (best[w] - instance.problem.utility(w, a) - price);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

// extreme rays of {x >= 0 : row . x >= 0 for all rows} in the plane
std::vector<Vector> cone_rays_2d(const std::vector<Vector>& rows) {
  std::vector<Vector> candidates;
  Vector e0(2), e1(2);
  e0 << 1.0, 0.0;
  e1 << 0.0, 1.0;
  candidates.push_back(e0);
  candidates.push_back(e1);
  for (const Vector& r : rows) {
    Vector d(2);
    d << r[1], -r[0];
    if (d[0] >= 0.0 && d[1] >= 0.0 && d.sum() > 0.0) candidates.push_back(d);
    d = -d;
    if (d[0] >= 0.0 && d[1] >= 0.0 && d.sum() > 0.0) candidates.push_back(d);
  }
  std::vector<Vector> feasible;
  for (Vector& c : candidates) {
    c /= c.sum();  // normalize to the probability scale
    bool ok = true;
    for (const Vector& r : rows)
      if (r.dot(c) < -1e-11) {
        ok = false;
        break;
      }
    if (!ok) continue;
    bool dup = false;
    for (const Vector& f : feasible)
      if ((f - c).cwiseAbs().maxCoeff() < 1e-12) {
        dup = true;
        break;
      }
    if (!dup) feasible.push_back(c);
  }
  if (feasible.empty()) return {};
  // the feasible set is an angular sector: its extreme rays are the
  // candidates with the least and greatest slope
  auto steeper = [](const Vector& a, const Vector& b) {
    return a[1] * b[0] < b[1] * a[0];
  };
  Vector lo = feasible[0], hi = feasible[0];
  for (const Vector& f : feasible) {
    if (steeper(f, lo)) lo = f;
    if (steeper(hi, f)) hi = f;
  }
  std::vector<Vector> rays = {lo};
  if ((hi - lo).cwiseAbs().maxCoeff() > 1e-12) rays.push_back(hi);
  return rays;
}

}  // namespace

std::vector<LambdaCandidate> enumerate_lambda_candidates(
    const MultiTypeInstance& instance, LambdaMode mode, int subsets_cap) {
  const int k = instance.n_types();
  std::vector<LambdaCandidate> out;
  if (mode == LambdaMode::Subsets) {
    if (k > subsets_cap) {
      std::ostringstream os;
      os << "subsets mode supports at most " << subsets_cap << " types, got "
         << k;
      throw CapExceeded(os.str());
    }
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
      LambdaCandidate c;
      for (int t = 0; t < k; ++t)
        if (mask & (1u << t)) c.members.push_back(t);
      out.push_back(std::move(c));
    }
    return out;
  }

  if (instance.problem.n_states != 2)
    throw ValidationError("intervals mode requires a binary state space");
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return instance.types[a].probs[0] < instance.types[b].probs[0];
  });
  // distinct types in binary state have distinct theta_1
  for (int i = 0; i + 1 < k; ++i)
    if (instance.types[order[i + 1]].probs[0] -
            instance.types[order[i]].probs[0] <=
        kTightTol)
      throw ValidationError("types must have distinct first coordinates");
  for (int lo = 0; lo < k; ++lo) {
    for (int hi = lo; hi < k; ++hi) {
      LambdaCandidate c;
      for (int i = lo; i <= hi; ++i) c.members.push_back(order[i]);
      std::sort(c.members.begin(), c.members.end());
      out.push_back(std::move(c));
    }
  }
  return out;
}

MultiSolveReport solve_grid_lp(const MultiTypeInstance& instance,
                               double epsilon,
                               const std::vector<LambdaCandidate>& candidates) {
  if (candidates.empty())
    throw ValidationError("at least one Lambda candidate is required");
  for (const LambdaCandidate& c : candidates) {
    if (c.members.empty())
      throw ValidationError("Lambda candidates must be non-empty");
    for (int t : c.members)
      if (t < 0 || t >= instance.n_types())
        throw ValidationError("Lambda candidate indexes an unknown type");
  }

  const int n = instance.problem.n_states;
  MultiSolveReport report;
  report.grid.epsilon = epsilon;
  report.grid.prices = price_grid(epsilon);
  report.grid.candidates = candidates;

  const auto& prices = report.grid.prices;
  const int n_cand = static_cast<int>(candidates.size());
  const int n_signals = static_cast<int>(prices.size()) * n_cand;

  // objective weight of pi(omega, s_{p,L}): p * sum_{theta in L} mu(omega, theta)
  auto objective_weight = [&](int cand, double price) {
    Vector w = Vector::Zero(n);
    for (int t : candidates[cand].members) w += instance.joint.col(t);
    return Vector(price * w);
  };

  std::vector<Vector> columns(n_signals);  // recovered pi columns
  double lp_value = 0.0;
  int lp_iterations = 0;

  if (n == 2) {
    // each signal's feasible send vectors form a planar cone; reduce it to
    // extreme rays so the LP keeps only two equality rows
    struct RayVar {
      int signal;
      Vector ray;
      double obj;
    };
    std::vector<RayVar> vars;
    for (size_t pi_ = 0; pi_ < prices.size(); ++pi_) {
      for (int c = 0; c < n_cand; ++c) {
        int s = static_cast<int>(pi_) * n_cand + c;
        std::vector<Vector> rows =
            prices[pi_] == 0.0
                ? std::vector<Vector>{}
                : purchase_rows(instance, candidates[c], prices[pi_]);
        Vector w = objective_weight(c, prices[pi_]);
        for (Vector& ray : cone_rays_2d(rows))
          vars.push_back({s, ray, w.dot(ray)});
      }
    }
    lp::Problem p;
    p.c.resize(vars.size());
    p.A.resize(2, vars.size());
    for (size_t k = 0; k < vars.size(); ++k) {
      p.c[k] = vars[k].obj;
      p.A.col(k) = vars[k].ray;
    }
    p.b = Vector::Ones(2);
    p.sense.assign(2, lp::Sense::Eq);
    lp::Solution sol = lp::solve(p);
    if (sol.status != lp::Status::Optimal)
      throw SolverError("grid LP did not solve to optimality");
    lp_value = sol.objective;
    lp_iterations = sol.iterations;
    for (int s = 0; s < n_signals; ++s) columns[s] = Vector::Zero(2);
    for (size_t k = 0; k < vars.size(); ++k)
      if (sol.x[k] > 0.0) columns[vars[k].signal] += sol.x[k] * vars[k].ray;
  } else {
    lp::Problem p;
    const int n_vars = n_signals * n;  // pi(omega, s) laid out signal-major
    std::vector<Vector> ineq_rows;
    std::vector<int> ineq_signal;
    for (size_t pi_ = 0; pi_ < prices.size(); ++pi_) {
      if (prices[pi_] == 0.0) continue;  // satisfied by nonnegativity
      for (int c = 0; c < n_cand; ++c) {
        for (Vector& row : purchase_rows(instance, candidates[c], prices[pi_])) {
          ineq_rows.push_back(std::move(row));
          ineq_signal.push_back(static_cast<int>(pi_) * n_cand + c);
        }
      }
    }
    const int m = n + static_cast<int>(ineq_rows.size());
    p.c = Vector::Zero(n_vars);
    p.A.setZero(m, n_vars);
    p.b = Vector::Zero(m);
    p.sense.assign(m, lp::Sense::Eq);
    for (size_t pi_ = 0; pi_ < prices.size(); ++pi_) {
      for (int c = 0; c < n_cand; ++c) {
        int s = static_cast<int>(pi_) * n_cand + c;
        Vector w = objective_weight(c, prices[pi_]);
        for (int omega = 0; omega < n; ++omega) {
          p.c[s * n + omega] = w[omega];
          p.A(omega, s * n + omega) = 1.0;  // row stochasticity
        }
      }
    }
    for (int omega = 0; omega < n; ++omega) p.b[omega] = 1.0;
    for (size_t r = 0; r < ineq_rows.size(); ++r) {
      int row = n + static_cast<int>(r);
      p.sense[row] = lp::Sense::Ge;
      int s = ineq_signal[r];
      for (int omega = 0; omega < n; ++omega)
        p.A(row, s * n + omega) = ineq_rows[r][omega];
    }
    lp::Solution sol = lp::solve(p);
    if (sol.status != lp::Status::Optimal)
      throw SolverError("grid LP did not solve to optimality");
    lp_value = sol.objective;
    lp_iterations = sol.iterations;
    for (int s = 0; s < n_signals; ++s)
      columns[s] = sol.x.segment(s * n, n);
  }

  // assemble the rule, pruning signals that received no mass
  std::vector<SignalEntry> signals;
  std::vector<LambdaCandidate> lambdas;
  for (size_t pi_ = 0; pi_ < prices.size(); ++pi_) {
    for (int c = 0; c < n_cand; ++c) {
      int s = static_cast<int>(pi_) * n_cand + c;
      if (columns[s].cwiseAbs().maxCoeff() <= kColumnPrune) continue;
      SignalEntry sig;
      sig.pi_given_omega = columns[s].cwiseMax(0.0);
      sig.price = prices[pi_];
      signals.push_back(std::move(sig));
      lambdas.push_back(candidates[c]);
    }
  }
  report.rule = AdvertisingRule::validated(std::move(signals));
  report.rule_lambdas = std::move(lambdas);
  report.lp_value = lp_value;
  report.lp_iterations = lp_iterations;
  report.status = "optimal";
  report.realized_revenue = evaluate_rule_multi(instance, report.rule);

  // exact per-signal price best response over the realized posterior values
  CostModel cost = CostModel::from_problem(instance.problem);
  AdvertisingRule reopt = report.rule;
  for (SignalEntry& sig : reopt.signals) {
    std::vector<double> values(instance.n_types(), -1.0);
    std::vector<double> mass(instance.n_types(), 0.0);
    std::vector<double> cand_prices = {sig.price};
    for (int t = 0; t < instance.n_types(); ++t) {
      double phi = instance.types[t].probs.dot(sig.pi_given_omega);
      mass[t] = instance.joint.col(t).dot(sig.pi_given_omega);
      if (phi <= 0.0) continue;
      Vector eta = instance.types[t].probs.cwiseProduct(sig.pi_given_omega) / phi;
      values[t] = cost.cost(eta);
      cand_prices.push_back(std::clamp(values[t], 0.0, 1.0));
    }
    auto signal_revenue = [&](double price) {
      double rev = 0.0;
      for (int t = 0; t < instance.n_types(); ++t)
        if (values[t] >= price - kBuyTol) rev += mass[t] * price;
      return rev;
    };
    double best_price = sig.price;
    double best_rev = signal_revenue(sig.price);
    for (double cand : cand_prices)
      if (signal_revenue(cand) > best_rev + 1e-12) {
        best_rev = signal_revenue(cand);
        best_price = cand;
      }
    sig.price = best_price;
  }
  report.reoptimized_rule = std::move(reopt);
  report.reoptimized_revenue =
      evaluate_rule_multi(instance, report.reoptimized_rule);
  return report;
}

LambdaCandidate realized_purchase_set(const MultiTypeInstance& instance,
                                      const AdvertisingRule& rule,
                                      int signal_index) {
  if (signal_index < 0 || signal_index >= rule.n_signals())
    throw ValidationError("signal index out of range");
  const SignalEntry& sig = rule.signals[signal_index];
  CostModel cost = CostModel::from_problem(instance.problem);
  LambdaCandidate out;
  for (int t = 0; t < instance.n_types(); ++t) {
    double phi = instance.types[t].probs.dot(sig.pi_given_omega);
    if (phi <= 0.0) continue;
    Vector eta = instance.types[t].probs.cwiseProduct(sig.pi_given_omega) / phi;
    if (cost.cost(eta) >= sig.price - kBuyTol) out.members.push_back(t);
  }
  return out;
}

AdvertisingRule merge_duplicate_signals(const MultiTypeInstance& instance,
                                        const AdvertisingRule& rule) {
  double before = evaluate_rule_multi(instance, rule);
  std::vector<SignalEntry> merged;
  std::vector<LambdaCandidate> keys;
  for (int s = 0; s < rule.n_signals(); ++s) {
    LambdaCandidate lam = realized_purchase_set(instance, rule, s);
    bool joined = false;
    for (size_t k = 0; k < merged.size(); ++k) {
      if (std::abs(merged[k].price - rule.signals[s].price) <= kProbTol &&
          keys[k] == lam) {
        merged[k].pi_given_omega += rule.signals[s].pi_given_omega;
        joined = true;
        break;
      }
    }
    if (!joined) {
      merged.push_back(rule.signals[s]);
      keys.push_back(std::move(lam));
    }
  }
  AdvertisingRule out = AdvertisingRule::validated(std::move(merged));
  double after = evaluate_rule_multi(instance, out);
  if (after < before - 1e-9)
    throw SolverError("merging duplicate signals decreased revenue");
  return out;
}

}  // namespace optad
