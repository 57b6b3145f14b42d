#include "optad/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace optad {

namespace {

constexpr double kVertexTol = 1e-9;
constexpr double kCondLimit = 1e12;

bool same_point(const Vector& a, const Vector& b) {
  return (a - b).cwiseAbs().maxCoeff() <= kVertexTol;
}

bool lex_less(const Vector& a, const Vector& b) {
  for (long i = 0; i < a.size(); ++i) {
    if (a[i] < b[i] - kVertexTol) return true;
    if (a[i] > b[i] + kVertexTol) return false;
  }
  return false;
}

long binomial_capped(long n, long k, long cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long r = 1;
  for (long i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > cap) return cap + 1;
  }
  return r;
}

// next k-combination of {0..n-1} in lexicographic order
bool next_combination(std::vector<int>& idx, int n) {
  int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<Vector> enumerate_vertices(const CostModel& cost, int piece,
                                       const VertexEnumOptions& options,
                                       VertexEnumStats* stats) {
  const int n = cost.n_states();
  const int pieces = cost.n_pieces();
  if (piece < 0 || piece >= pieces)
    throw ValidationError("piece index out of range");

  // system over x = (eta, slacks): ||eta||_1 = 1 and, for a' != piece,
  // (c_piece - c_a') . eta + s_a' = 0; every basic solution with x >= 0 is
  // a vertex of P_piece
  const int m = pieces;             // 1 + (pieces - 1) equations
  const int nv = n + pieces - 1;    // eta plus one slack per other piece
  Matrix system = Matrix::Zero(m, nv);
  Vector rhs = Vector::Zero(m);
  system.row(0).head(n).setOnes();
  rhs[0] = 1.0;
  {
    int row = 1;
    for (int other = 0; other < pieces; ++other) {
      if (other == piece) continue;
      system.row(row).head(n) = (cost.coeffs.col(piece) - cost.coeffs.col(other)).transpose();
      system(row, n + row - 1) = 1.0;
      ++row;
    }
  }

  long n_bases = binomial_capped(nv, m, options.max_bases);
  if (n_bases > options.max_bases) {
    std::ostringstream os;
    os << "basis enumeration needs more than " << options.max_bases
       << " index sets (C(" << nv << "," << m
       << ") per piece); reduce the state or action count";
    throw CapExceeded(os.str());
  }

  std::vector<Vector> found;
  std::vector<int> idx(m);
  for (int i = 0; i < m; ++i) idx[i] = i;
  Matrix basis(m, m);
  do {
    if (stats) ++stats->bases_examined;
    for (int c = 0; c < m; ++c) basis.col(c) = system.col(idx[c]);
    Eigen::ColPivHouseholderQR<Matrix> qr(basis);
    if (qr.rank() < m) {
      if (stats) ++stats->singular_skipped;
      continue;
    }
    const auto& qrR = qr.matrixQR();
    double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      double d = std::abs(qrR(i, i));
      dmax = std::max(dmax, d);
      dmin = std::min(dmin, d);
    }
    if (dmin <= 0.0 || dmax / dmin > kCondLimit) {
      if (stats) ++stats->near_singular_skipped;
      continue;
    }
    Vector xb = qr.solve(rhs);
    bool feasible = true;
    for (int i = 0; i < m; ++i) {
      if (xb[i] < -kVertexTol) {
        feasible = false;
        break;
      }
    }
    if (!feasible) continue;

    Vector eta = Vector::Zero(n);
    for (int c = 0; c < m; ++c)
      if (idx[c] < n) eta[idx[c]] = std::max(xb[c], 0.0);
    double sum = eta.sum();
    if (std::abs(sum - 1.0) > 1e-7) continue;  // numerically off the simplex
    eta /= sum;

    bool dup = false;
    for (const Vector& v : found)
      if (same_point(v, eta)) {
        dup = true;
        break;
      }
    if (!dup) found.push_back(std::move(eta));
  } while (next_combination(idx, nv));

  std::sort(found.begin(), found.end(), lex_less);
  return found;
}

std::vector<Vector> enumerate_vertices(const DecisionProblem& problem,
                                       int action,
                                       const VertexEnumOptions& options,
                                       VertexEnumStats* stats) {
  return enumerate_vertices(CostModel::from_problem(problem), action, options,
                            stats);
}

VertexSet all_vertices(const CostModel& cost, const VertexEnumOptions& options,
                       VertexEnumStats* stats) {
  VertexSet out;
  for (int piece = 0; piece < cost.n_pieces(); ++piece) {
    for (Vector& v : enumerate_vertices(cost, piece, options, stats)) {
      bool dup = false;
      for (const Vertex& existing : out.vertices)
        if (same_point(existing.point, v)) {
          dup = true;
          break;
        }
      if (!dup) out.vertices.push_back({std::move(v), {}, 0});
    }
  }
  std::sort(out.vertices.begin(), out.vertices.end(),
            [](const Vertex& a, const Vertex& b) {
              return lex_less(a.point, b.point);
            });
  for (Vertex& v : out.vertices) {
    double best = cost.cost(v.point);
    for (int piece = 0; piece < cost.n_pieces(); ++piece)
      if (cost.piece_cost(piece, v.point) <= best + kVertexTol)
        v.actions.push_back(piece);
    v.nnz = 0;
    for (long i = 0; i < v.point.size(); ++i)
      if (v.point[i] > kVertexTol) ++v.nnz;
  }
  return out;
}

VertexSet all_vertices(const DecisionProblem& problem,
                       const VertexEnumOptions& options,
                       VertexEnumStats* stats) {
  return all_vertices(CostModel::from_problem(problem), options, stats);
}

SegmentSet build_segments(const SingleTypeInstance& instance,
                          const VertexSet& vertices) {
  CostModel cost = instance.cost_model();
  const int nv = vertices.size();
  std::vector<double> r(nv), c(nv);
  for (int i = 0; i < nv; ++i) {
    r[i] = likelihood_ratio(instance.mu, instance.theta, vertices.vertices[i].point);
    c[i] = cost.cost(vertices.vertices[i].point);
  }

  SegmentSet out;
  for (int i = 0; i < nv; ++i)
    out.pairs.push_back({i, i, vertices.vertices[i].actions.front(), r[i], c[i],
                         r[i], c[i], 0.0});
  for (int i = 0; i < nv; ++i) {
    for (int j = i + 1; j < nv; ++j) {
      const auto& ai = vertices.vertices[i].actions;
      const auto& aj = vertices.vertices[j].actions;
      int shared = -1;
      for (int a : ai) {
        if (std::find(aj.begin(), aj.end(), a) != aj.end()) {
          shared = a;
          break;
        }
      }
      if (shared < 0) continue;
      double slope = (r[i] - r[j]) * (c[i] - c[j]);
      if (slope > kVertexTol) continue;
      out.pairs.push_back({i, j, shared, r[i], c[i], r[j], c[j], slope});
    }
  }
  return out;
}

}  // namespace optad
