#pragma once

#include <Eigen/Dense>

#include <vector>

namespace optad::lp {

using Vector = Eigen::VectorXd;
// row-major so simplex row operations are contiguous
using Tableau =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Sense { Eq, Le, Ge };

// Dense linear program: maximize c.x subject to A x (sense) b, x >= 0.
struct Problem {
  Vector c;
  Tableau A;
  Vector b;
  std::vector<Sense> sense;

  int n_vars() const { return static_cast<int>(c.size()); }
  int n_rows() const { return static_cast<int>(b.size()); }
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Solution {
  Status status = Status::IterationLimit;
  double objective = 0.0;
  Vector x;
  Vector duals;  // one per row, valid when status == Optimal
  int iterations = 0;
};

struct Options {
  int max_iterations = 200000;
  double tol = 1e-9;
};

// Two-phase primal simplex on a dense tableau. Dantzig pricing with a
// Bland fallback on long degenerate runs; redundant equality rows are
// tolerated (their artificials stay basic at zero).
Solution solve(const Problem& problem, const Options& options = {});

}  // namespace optad::lp
