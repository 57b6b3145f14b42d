#pragma once

#include "optad/model.hpp"

#include <vector>

namespace optad {

struct Vertex {
  Vector point;
  std::vector<int> actions;  // every piece whose polytope contains the point
  int nnz = 0;               // entries above kProbTol
};

struct VertexSet {
  std::vector<Vertex> vertices;

  int size() const { return static_cast<int>(vertices.size()); }
};

// Unordered vertex pair {i, j} sharing a best-response region, kept only
// when (R(i) - R(j))(C(i) - C(j)) <= tol; i == j for singletons.
struct SegmentPair {
  int i = 0;
  int j = 0;
  int action = 0;  // shared piece
  double r_i = 0.0, c_i = 0.0;
  double r_j = 0.0, c_j = 0.0;
  double slope_product = 0.0;
};

struct SegmentSet {
  std::vector<SegmentPair> pairs;

  int size() const { return static_cast<int>(pairs.size()); }
};

struct VertexEnumOptions {
  // hard cap on basis index sets per call; instances where neither the
  // state count nor the piece count is small blow past it
  long max_bases = 2000000;
};

struct VertexEnumStats {
  long bases_examined = 0;
  long singular_skipped = 0;
  long near_singular_skipped = 0;
};

// Vertices of P_a = {eta in simplex : C_a(eta) <= C_a'(eta) for all a'},
// enumerated as basic feasible solutions of the defining linear system
// (|pieces| equations over n + |pieces| - 1 nonnegative variables).
std::vector<Vector> enumerate_vertices(const CostModel& cost, int piece,
                                       const VertexEnumOptions& options = {},
                                       VertexEnumStats* stats = nullptr);
std::vector<Vector> enumerate_vertices(const DecisionProblem& problem,
                                       int action,
                                       const VertexEnumOptions& options = {},
                                       VertexEnumStats* stats = nullptr);

// Union over pieces with cross-piece dedup; each vertex is tagged with all
// pieces whose polytope contains it, and is sorted lexicographically.
VertexSet all_vertices(const CostModel& cost,
                       const VertexEnumOptions& options = {},
                       VertexEnumStats* stats = nullptr);
VertexSet all_vertices(const DecisionProblem& problem,
                       const VertexEnumOptions& options = {},
                       VertexEnumStats* stats = nullptr);

// All same-region pairs with nonpositive slope product, plus every
// singleton {i, i}; R and C are precomputed at both endpoints.
SegmentSet build_segments(const SingleTypeInstance& instance,
                          const VertexSet& vertices);

}  // namespace optad
