#include "optad/lp.hpp"

#include <cmath>
#include <limits>

namespace optad::lp {

namespace {

constexpr double kPivotTol = 1e-10;
constexpr int kBlandTrigger = 120;  // degenerate pivots before Bland kicks in

struct Simplex {
  Tableau tab;             // m x (total + 1), last column is the rhs
  Vector obj_row;          // reduced costs, length total
  double obj_value = 0.0;
  std::vector<int> basis;  // basic column per row
  int m = 0;
  int total = 0;
  int iterations = 0;
  double tol = 1e-9;

  // price out the basis: obj_row = c - c_B B^{-1} A, obj_value = c_B x_B
  void price(const Vector& c) {
    obj_row = c;
    obj_value = 0.0;
    for (int i = 0; i < m; ++i) {
      double cb = c[basis[i]];
      if (cb == 0.0) continue;
      obj_row -= cb * tab.row(i).head(total).transpose();
      obj_value += cb * tab(i, total);
    }
  }

  void pivot(int row, int col) {
    double p = tab(row, col);
    tab.row(row) /= p;
    for (int i = 0; i < m; ++i) {
      if (i == row) continue;
      double f = tab(i, col);
      if (f != 0.0) tab.row(i) -= f * tab.row(row);
    }
    double g = obj_row[col];
    if (g != 0.0) {
      obj_row -= g * tab.row(row).head(total).transpose();
      obj_value += g * tab(row, total);
    }
    basis[row] = col;
    ++iterations;
  }

  Status run(const std::vector<char>& allowed, int max_iterations) {
    int degenerate_run = 0;
    bool bland = false;
    while (iterations < max_iterations) {
      int col = -1;
      if (!bland) {
        double best = tol;
        for (int j = 0; j < total; ++j)
          if (allowed[j] && obj_row[j] > best) {
            best = obj_row[j];
            col = j;
          }
      } else {
        for (int j = 0; j < total; ++j)
          if (allowed[j] && obj_row[j] > tol) {
            col = j;
            break;
          }
      }
      if (col < 0) return Status::Optimal;

      int row = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        double a = tab(i, col);
        if (a <= kPivotTol) continue;
        double ratio = tab(i, total) / a;
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 && row >= 0 && basis[i] < basis[row])) {
          best_ratio = ratio;
          row = i;
        }
      }
      if (row < 0) return Status::Unbounded;

      bool degenerate = best_ratio < 1e-12;
      pivot(row, col);
      if (degenerate) {
        if (++degenerate_run > kBlandTrigger) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
    }
    return Status::IterationLimit;
  }
};

}  // namespace

Solution solve(const Problem& problem, const Options& options) {
  const int m = problem.n_rows();
  const int n = problem.n_vars();
  Solution sol;

  // column layout: structural | slack/surplus | artificial identity block.
  // Every row gets an artificial column; rows that start with a slack or
  // surplus basis never use theirs, it only serves the dual readout.
  int n_aux = 0;
  for (Sense s : problem.sense)
    if (s != Sense::Eq) ++n_aux;
  const int total = n + n_aux + m;

  Simplex sx;
  sx.m = m;
  sx.total = total;
  sx.tol = options.tol;
  sx.tab.setZero(m, total + 1);
  sx.basis.assign(m, -1);

  std::vector<double> row_scale(m, 1.0);  // stored row = scale * original row
  bool need_phase1 = false;
  int aux_at = n;
  for (int i = 0; i < m; ++i) {
    double scale = problem.b[i] < 0.0 ? -1.0 : 1.0;
    Sense s = problem.sense[i];
    if (scale < 0.0 && s != Sense::Eq)
      s = (s == Sense::Le) ? Sense::Ge : Sense::Le;

    if (s == Sense::Ge && scale * problem.b[i] == 0.0) {
      // homogeneous >= row: store its negation so the surplus starts basic
      scale = -scale;
      s = Sense::Le;
    }
    row_scale[i] = scale;
    sx.tab.row(i).head(n) = scale * problem.A.row(i);
    sx.tab(i, total) = scale * problem.b[i];

    if (problem.sense[i] != Sense::Eq) {
      // slack for stored-Le rows, surplus for stored-Ge rows
      sx.tab(i, aux_at) = (s == Sense::Le) ? 1.0 : -1.0;
      if (s == Sense::Le) sx.basis[i] = aux_at;
      ++aux_at;
    }
    sx.tab(i, n + n_aux + i) = 1.0;
    if (sx.basis[i] < 0) {
      sx.basis[i] = n + n_aux + i;
      need_phase1 = true;
    }
  }

  std::vector<char> allowed(total, 1);
  for (int j = n + n_aux; j < total; ++j) allowed[j] = 0;  // never re-enter

  if (need_phase1) {
    Vector c1 = Vector::Zero(total);
    for (int j = n + n_aux; j < total; ++j) c1[j] = -1.0;
    sx.price(c1);
    Status st = sx.run(allowed, options.max_iterations);
    sol.iterations = sx.iterations;
    if (st != Status::Optimal) {
      sol.status = st;
      return sol;
    }
    if (sx.obj_value < -1e-7) {
      sol.status = Status::Infeasible;
      return sol;
    }
    // drive leftover basic artificials (at zero) out where possible;
    // rows where no pivot exists are redundant and keep a zero artificial
    for (int i = 0; i < m; ++i) {
      if (sx.basis[i] < n + n_aux) continue;
      for (int j = 0; j < n + n_aux; ++j)
        if (std::abs(sx.tab(i, j)) > 1e-8) {
          sx.pivot(i, j);
          break;
        }
    }
  }

  Vector c2 = Vector::Zero(total);
  c2.head(n) = problem.c;
  sx.price(c2);
  Status st = sx.run(allowed, options.max_iterations);
  sol.status = st;
  sol.iterations = sx.iterations;
  if (st != Status::Optimal) return sol;

  sol.x = Vector::Zero(n);
  for (int i = 0; i < m; ++i)
    if (sx.basis[i] < n) sol.x[sx.basis[i]] = sx.tab(i, total);
  sol.objective = sx.obj_value;

  // duals: the artificial block is the initial identity of the stored rows,
  // so obj_row[art_i] = -y_stored_i, and the original row dual rescales it
  sol.duals = Vector::Zero(m);
  for (int i = 0; i < m; ++i)
    sol.duals[i] = -sx.obj_row[n + n_aux + i] * row_scale[i];
  return sol;
}

}  // namespace optad::lp
