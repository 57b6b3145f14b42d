#pragma once

#include "optad/geometry.hpp"
#include "optad/model.hpp"

#include <string>
#include <utility>
#include <vector>

namespace optad {

// The Theorem-5 style program over segment variables: for each stored pair
// {i, j}, gamma_ij is the mass placed at endpoint i and gamma_ji the mass at
// endpoint j (a single mass for singletons). Objective constants R, C and
// k_ij = (R(i)-R(j))(C(i)-C(j)) live in `segments`.
struct SegmentProgram {
  VertexSet vertices;
  SegmentSet segments;
  std::vector<double> gamma_ij;  // one per pair, mass at endpoint i
  std::vector<double> gamma_ji;  // one per pair, mass at endpoint j

  // sum over pairs of gamma_ij R_i C_i + gamma_ji R_j C_j
  //   - k_ij gamma_ij gamma_ji / (gamma_ij + gamma_ji),
  // with the ratio term extended by 0 at gamma_ij + gamma_ji = 0
  double objective() const;
};

struct SolveDiagnostics {
  std::string status;      // "optimal", "iteration_limit", "closed_form"
  int iterations = 0;      // column-generation rounds (0 for closed form)
  double max_constraint_violation = 0.0;  // ||sum phi eta - theta||_inf
  double certified_gap = 0.0;             // pricing bound at termination
  int merge_flags = 0;                    // improving merges found post-solve
  int sparsity_flags = 0;                 // posteriors denser than 2|A|
  VertexEnumStats enum_stats;
};

struct SolveReport {
  double revenue = 0.0;
  PosteriorDecomposition decomposition;
  AdvertisingRule rule;
  SolveDiagnostics diagnostics;
};

struct SolveOptions {
  VertexEnumOptions enumeration;
  int max_rounds = 400;        // column-generation rounds
  double pricing_tol = 1e-9;   // certified closure gap at termination
};

// Optimal single-type advertising rule via the concave program over
// vertex-pair segments. The program is solved by column generation over
// segment posteriors: the master LP picks a convex decomposition of theta
// from a finite point pool, and pricing maximizes the concave quadratic
// f(eta) - alpha.eta on every segment in closed form, so termination
// certifies the objective to pricing_tol.
SolveReport solve_concave_closure(const SingleTypeInstance& instance,
                                  const SolveOptions& options = {});

// Shrinks a feasible decomposition to at most n parts by shifting mass
// along null directions of the posterior matrix; preserves sum phi eta and
// never decreases sum phi R C.
PosteriorDecomposition reduce_signals(const SingleTypeInstance& instance,
                                      PosteriorDecomposition decomp);

// Exact revenue change from merging parts s and t into one signal.
// Lower-bounded by -(phi_s phi_t / (phi_s + phi_t)) (R_s - R_t)(C_s - C_t).
double merge_gain(const SingleTypeInstance& instance,
                  const PosteriorDecomposition& decomp, int s_index,
                  int t_index);

struct OptimalityReport {
  // part pairs whose merge strictly improves revenue (> 1e-7)
  std::vector<std::pair<int, int>> improving_merges;
  // parts whose posterior has more than 2|A| entries above 1e-7
  std::vector<int> dense_posteriors;

  bool clean() const {
    return improving_merges.empty() && dense_posteriors.empty();
  }
};

OptimalityReport check_optimality_conditions(
    const SingleTypeInstance& instance, const PosteriorDecomposition& decomp);

// Binary-state fast path: builds the piecewise-linear C(eta_1), enumerates
// (vertex, segment) tangencies of f = R C and returns the best one- or
// two-signal rule in O(|A|^2) tangent computations.
SolveReport solve_binary(const SingleTypeInstance& instance);

// Baseline: charge C(theta) with an uninformative signal.
double no_disclosure_revenue(const SingleTypeInstance& instance);

// Decomposition of theta over the vertices of its own best-response
// polytope; every posterior has at most |A| nonzero entries and, when
// theta = mu, the revenue still equals C(theta).
PosteriorDecomposition common_prior_decomposition(
    const SingleTypeInstance& instance);

}  // namespace optad
