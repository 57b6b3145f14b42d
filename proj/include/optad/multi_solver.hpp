#pragma once

#include "optad/model.hpp"

#include <string>
#include <vector>

namespace optad {

// A candidate purchase set: the types intended to buy at a given signal.
struct LambdaCandidate {
  std::vector<int> members;  // ascending type indices, non-empty

  bool operator==(const LambdaCandidate& other) const {
    return members == other.members;
  }
};

enum class LambdaMode { Subsets, Intervals };

// Subsets mode: all 2^|Theta| - 1 non-empty subsets (|Theta| capped).
// Intervals mode (binary state): all contiguous runs of the types sorted
// by theta_1, at most |Theta|(|Theta|+1)/2 candidates.
std::vector<LambdaCandidate> enumerate_lambda_candidates(
    const MultiTypeInstance& instance, LambdaMode mode, int subsets_cap = 16);

// The assembled price-grid LP: one signal s_{p,Lambda} per grid price and
// candidate; variables are the send probabilities pi(omega, s).
struct GridLP {
  double epsilon = 0.0;
  std::vector<double> prices;  // {0, eps, 2 eps, ..., 1}
  std::vector<LambdaCandidate> candidates;

  int n_signals() const {
    return static_cast<int>(prices.size() * candidates.size());
  }
};

struct MultiSolveReport {
  double lp_value = 0.0;            // certified lower bound (>= OPT - eps)
  AdvertisingRule rule;             // zero-mass signals pruned
  std::vector<LambdaCandidate> rule_lambdas;  // declared Lambda per signal
  double realized_revenue = 0.0;    // evaluate_rule_multi(rule)
  // prices re-optimized per signal over {C(eta^s(theta))}: informational,
  // never below realized_revenue
  AdvertisingRule reoptimized_rule;
  double reoptimized_revenue = 0.0;
  GridLP grid;
  std::string status;
  int lp_iterations = 0;
};

// eps-suboptimal advertising rule for the general problem: maximizes the
// expected revenue over signals s_{p,Lambda} subject to every type in
// Lambda being willing to pay p, written as per-action linear constraints.
MultiSolveReport solve_grid_lp(const MultiTypeInstance& instance,
                               double epsilon,
                               const std::vector<LambdaCandidate>& candidates);

// Types whose posterior cost of uncertainty weakly exceeds the signal's
// price; types that never receive the signal are excluded.
LambdaCandidate realized_purchase_set(const MultiTypeInstance& instance,
                                      const AdvertisingRule& rule,
                                      int signal_index);

// Sums the columns of signals sharing (price, realized purchase set); the
// merged rule never earns less (checked within 1e-9).
AdvertisingRule merge_duplicate_signals(const MultiTypeInstance& instance,
                                        const AdvertisingRule& rule);

}  // namespace optad
