#include "optad/oracle.hpp"

#include "optad/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace optad {

namespace {

long composition_count(int n, int m, long cap) {
  // C(m + n - 1, n - 1), capped
  long r = 1;
  for (long i = 1; i <= n - 1; ++i) {
    r = r * (m + i) / i;
    if (r > cap) return cap + 1;
  }
  return r;
}

}  // namespace

SimplexGrid SimplexGrid::build(int n_states, int resolution, long max_points) {
  if (resolution < 1) throw ValidationError("grid resolution must be >= 1");
  long count = composition_count(n_states, resolution, max_points);
  if (count > max_points) {
    std::ostringstream os;
    os << "simplex grid would exceed " << max_points << " points (n="
       << n_states << ", m=" << resolution << ")";
    throw CapExceeded(os.str());
  }

  SimplexGrid grid;
  grid.resolution = resolution;
  grid.points.reserve(count);
  // iterative weak-composition enumeration, (m,0,...,0) first
  std::vector<int> k(n_states, 0);
  k[0] = resolution;
  if (n_states == 1) k[0] = resolution;
  while (true) {
    Vector p(n_states);
    for (int i = 0; i < n_states; ++i)
      p[i] = static_cast<double>(k[i]) / resolution;
    grid.points.push_back(std::move(p));
    int i = n_states - 2;
    while (i >= 0 && k[i] == 0) --i;
    if (i < 0) break;
    int rest = k[n_states - 1];
    k[i] -= 1;
    if (i + 1 == n_states - 1) {
      k[i + 1] = rest + 1;
    } else {
      k[i + 1] = rest + 1;
      k[n_states - 1] = 0;
    }
  }
  return grid;
}

double grid_concave_closure(const SingleTypeInstance& instance, int resolution,
                            const OracleOptions& options) {
  const int n = instance.problem.n_states;
  SimplexGrid grid = SimplexGrid::build(n, resolution, options.max_grid_points);
  CostModel cost = instance.cost_model();

  lp::Problem p;
  p.c.resize(grid.points.size());
  p.A.resize(n, grid.points.size());
  for (size_t k = 0; k < grid.points.size(); ++k) {
    p.c[k] = likelihood_ratio(instance.mu, instance.theta, grid.points[k]) *
             cost.cost(grid.points[k]);
    p.A.col(k) = grid.points[k];
  }
  p.b = instance.theta.probs;
  p.sense.assign(n, lp::Sense::Eq);

  lp::Solution sol = lp::solve(p);
  if (sol.status != lp::Status::Optimal)
    throw SolverError("grid closure LP did not solve to optimality");
  return sol.objective;
}

double brute_force_multi(const MultiTypeInstance& instance, int n_signals,
                         int grid_resolution) {
  if (instance.problem.n_states != 2)
    throw CapExceeded("brute_force_multi handles binary state only");
  if (n_signals < 1 || n_signals > 2)
    throw CapExceeded("brute_force_multi handles at most two signals");
  if (instance.n_types() > 4)
    throw CapExceeded("brute_force_multi handles at most four types");
  if (grid_resolution < 1 || grid_resolution > 50)
    throw CapExceeded("brute_force_multi grid resolution must be in [1, 50]");

  CostModel cost = CostModel::from_problem(instance.problem);
  const int g = grid_resolution;
  const int n_types = instance.n_types();

  // best revenue of one signal column under the exact best price
  auto column_revenue = [&](const Vector& pi) {
    std::vector<double> candidates = {0.0};
    std::vector<double> value(n_types), mass(n_types);
    for (int t = 0; t < n_types; ++t) {
      double phi = instance.types[t].probs.dot(pi);
      mass[t] = instance.joint.col(t).dot(pi);
      if (phi <= 0.0) {
        value[t] = -1.0;  // never receives the signal
        continue;
      }
      Vector eta = instance.types[t].probs.cwiseProduct(pi) / phi;
      value[t] = cost.cost(eta);
      candidates.push_back(value[t]);
    }
    double best = 0.0;
    for (double price : candidates) {
      if (price <= 0.0) continue;
      double rev = 0.0;
      for (int t = 0; t < n_types; ++t)
        if (value[t] >= price - kBuyTol) rev += mass[t] * price;
      best = std::max(best, rev);
    }
    return best;
  };

  if (n_signals == 1) {
    Vector pi = Vector::Ones(2);
    return column_revenue(pi);
  }

  double best = 0.0;
  for (int i = 0; i <= g; ++i) {
    for (int j = 0; j <= g; ++j) {
      // symmetric schemes: (i, j) and (g-i, g-j) describe the same rule
      // with the signals swapped; keep the lexicographically smaller one
      if (std::make_pair(i, j) > std::make_pair(g - i, g - j)) continue;
      Vector s(2), t(2);
      s << static_cast<double>(i) / g, static_cast<double>(j) / g;
      t << 1.0 - s[0], 1.0 - s[1];
      double rev = column_revenue(s) + column_revenue(t);
      best = std::max(best, rev);
    }
  }
  return best;
}

}  // namespace optad
