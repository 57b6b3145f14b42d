#pragma once

#include "optad/model.hpp"

#include <vector>

namespace optad {

// All compositions (k_1/m, ..., k_n/m) with sum k = m; point count is
// C(m + n - 1, n - 1).
struct SimplexGrid {
  int resolution = 1;
  std::vector<Vector> points;

  static SimplexGrid build(int n_states, int resolution, long max_points);
};

struct OracleOptions {
  long max_grid_points = 200000;
};

// Brute-force reference for the single-type problem: the concave closure
// restricted to grid posteriors, solved as the LP
//   max sum_k lambda_k f(x_k)  s.t.  sum_k lambda_k x_k = theta, lambda >= 0
// with f = R * C. A lower bound on the true closure value, monotone under
// grid refinement.
double grid_concave_closure(const SingleTypeInstance& instance, int resolution,
                            const OracleOptions& options = {});

// Exhaustive reference for tiny multi-type instances: binary state, at most
// two signals, send probabilities on the grid {0, 1/g, ..., 1}, exact best
// price per signal from the realized posterior values.
double brute_force_multi(const MultiTypeInstance& instance, int n_signals,
                         int grid_resolution);

}  // namespace optad
