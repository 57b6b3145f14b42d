#include "optad/single_solver.hpp"

#include "optad/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace optad {

namespace {

constexpr double kActiveMass = 1e-9;     // pair activity threshold
constexpr double kMergeCoincide = 1e-7;  // posterior coincidence threshold

struct PoolPoint {
  int pair = 0;    // index into segments.pairs
  double beta = 1.0;  // point = beta * v_i + (1 - beta) * v_j
  Vector point;
  double value = 0.0;  // f(point) evaluated on the segment
};

double pair_value(const SegmentPair& p, double beta) {
  double k = (p.r_i - p.r_j) * (p.c_i - p.c_j);
  return beta * p.r_i * p.c_i + (1.0 - beta) * p.r_j * p.c_j -
         k * beta * (1.0 - beta);
}

Vector pair_point(const VertexSet& vs, const SegmentPair& p, double beta) {
  return beta * vs.vertices[p.i].point + (1.0 - beta) * vs.vertices[p.j].point;
}

}  // namespace

double SegmentProgram::objective() const {
  double total = 0.0;
  for (size_t q = 0; q < segments.pairs.size(); ++q) {
    const SegmentPair& p = segments.pairs[q];
    double gij = gamma_ij[q];
    double gji = p.i == p.j ? 0.0 : gamma_ji[q];
    total += gij * p.r_i * p.c_i + gji * p.r_j * p.c_j;
    double mass = gij + gji;
    if (mass > 0.0) {
      double k = (p.r_i - p.r_j) * (p.c_i - p.c_j);
      total -= k * gij * gji / mass;
    }
  }
  return total;
}

SolveReport solve_concave_closure(const SingleTypeInstance& instance,
                                  const SolveOptions& options) {
  const int n = instance.problem.n_states;
  CostModel cost = instance.cost_model();

  SolveReport report;
  SegmentProgram program;
  program.vertices =
      all_vertices(cost, options.enumeration, &report.diagnostics.enum_stats);
  program.segments = build_segments(instance, program.vertices);
  const auto& pairs = program.segments.pairs;

  // point pool: every vertex through its singleton pair, plus the midpoint
  // of every strict pair to give pricing a warm start
  std::vector<PoolPoint> pool;
  for (size_t q = 0; q < pairs.size(); ++q) {
    if (pairs[q].i == pairs[q].j) {
      pool.push_back({static_cast<int>(q), 1.0,
                      program.vertices.vertices[pairs[q].i].point,
                      pair_value(pairs[q], 1.0)});
    } else if (pairs.size() <= 20000) {
      pool.push_back({static_cast<int>(q), 0.5,
                      pair_point(program.vertices, pairs[q], 0.5),
                      pair_value(pairs[q], 0.5)});
    }
  }

  lp::Solution master;
  int round = 0;
  double gap = std::numeric_limits<double>::infinity();
  for (; round < options.max_rounds; ++round) {
    lp::Problem mp;
    mp.c.resize(pool.size());
    mp.A.resize(n, pool.size());
    for (size_t k = 0; k < pool.size(); ++k) {
      mp.c[k] = pool[k].value;
      mp.A.col(k) = pool[k].point;
    }
    mp.b = instance.theta.probs;
    mp.sense.assign(n, lp::Sense::Eq);
    master = lp::solve(mp);
    if (master.status != lp::Status::Optimal)
      throw SolverError("master LP failed (theta outside the vertex hull?)");

    // pricing: maximize f_seg(beta) - alpha . point(beta) per pair; the
    // quadratic coefficient is k <= 0, so the maximizer is closed form
    const Vector& alpha = master.duals;
    gap = 0.0;
    std::vector<PoolPoint> added;
    for (size_t q = 0; q < pairs.size(); ++q) {
      const SegmentPair& p = pairs[q];
      double ai = alpha.dot(program.vertices.vertices[p.i].point);
      double g1 = p.r_i * p.c_i - ai;  // beta = 1
      double best_beta = 1.0, best_g = g1;
      if (p.i != p.j) {
        double aj = alpha.dot(program.vertices.vertices[p.j].point);
        double g0 = p.r_j * p.c_j - aj;  // beta = 0
        if (g0 > best_g) {
          best_g = g0;
          best_beta = 0.0;
        }
        double k = (p.r_i - p.r_j) * (p.c_i - p.c_j);
        if (k < -1e-15) {
          // g(beta) = k b^2 + (F_i - F_j - k - ai + aj) b + (F_j - aj)
          double lin = p.r_i * p.c_i - p.r_j * p.c_j - k - ai + aj;
          double b = -lin / (2.0 * k);
          if (b > 0.0 && b < 1.0) {
            double g = k * b * b + lin * b + p.r_j * p.c_j - aj;
            if (g > best_g) {
              best_g = g;
              best_beta = b;
            }
          }
        }
      }
      gap = std::max(gap, best_g);
      if (best_g > options.pricing_tol * 0.5)
        added.push_back({static_cast<int>(q), best_beta,
                         pair_point(program.vertices, p, best_beta),
                         pair_value(p, best_beta)});
    }
    if (gap <= options.pricing_tol) break;
    if (added.empty()) break;  // numerically stuck below tolerance
    for (PoolPoint& pt : added) pool.push_back(std::move(pt));
  }

  report.diagnostics.status =
      gap <= options.pricing_tol ? "optimal" : "iteration_limit";
  report.diagnostics.iterations = round + 1;
  report.diagnostics.certified_gap = std::max(gap, 0.0);

  // recover gamma per pair from the active pool columns
  program.gamma_ij.assign(pairs.size(), 0.0);
  program.gamma_ji.assign(pairs.size(), 0.0);
  for (size_t k = 0; k < pool.size(); ++k) {
    double lambda = master.x[k];
    if (lambda <= 0.0) continue;
    program.gamma_ij[pool[k].pair] += lambda * pool[k].beta;
    program.gamma_ji[pool[k].pair] += lambda * (1.0 - pool[k].beta);
  }

  // one posterior per active pair (Lemma-4 uniqueness), then coincidence
  // merging across pairs
  PosteriorDecomposition decomp;
  for (size_t q = 0; q < pairs.size(); ++q) {
    double gij = program.gamma_ij[q];
    double gji = pairs[q].i == pairs[q].j ? 0.0 : program.gamma_ji[q];
    double mass = gij + gji;
    if (mass <= kActiveMass) continue;
    Vector eta = (gij * program.vertices.vertices[pairs[q].i].point +
                  gji * program.vertices.vertices[pairs[q].j].point) /
                 mass;
    bool merged = false;
    for (DecompositionPart& part : decomp.parts) {
      if ((part.eta.probs - eta).cwiseAbs().maxCoeff() <= kMergeCoincide) {
        part.eta.probs =
            (part.phi * part.eta.probs + mass * eta) / (part.phi + mass);
        part.phi += mass;
        merged = true;
        break;
      }
    }
    if (!merged) {
      Belief b;
      b.probs = std::move(eta);
      decomp.parts.push_back({mass, std::move(b)});
    }
  }
  if (decomp.n_parts() > n) decomp = reduce_signals(instance, decomp);

  report.diagnostics.max_constraint_violation =
      (decomp.barycenter() - instance.theta.probs).cwiseAbs().maxCoeff();
  report.decomposition = decomp;
  report.rule = decomposition_to_rule(instance, decomp);
  report.revenue = decomposition_revenue(instance, decomp);

  OptimalityReport opt = check_optimality_conditions(instance, decomp);
  report.diagnostics.merge_flags = static_cast<int>(opt.improving_merges.size());
  report.diagnostics.sparsity_flags = static_cast<int>(opt.dense_posteriors.size());
  return report;
}

PosteriorDecomposition reduce_signals(const SingleTypeInstance& instance,
                                      PosteriorDecomposition decomp) {
  const int n = instance.problem.n_states;
  CostModel cost = instance.cost_model();
  Vector target = decomp.barycenter();
  if ((target - instance.theta.probs).cwiseAbs().maxCoeff() > kProbTol)
    throw ValidationError("decomposition is infeasible for theta");

  while (decomp.n_parts() > n) {
    const int k = decomp.n_parts();
    Matrix etas(n, k);
    Vector values(k);
    for (int l = 0; l < k; ++l) {
      etas.col(l) = decomp.parts[l].eta.probs;
      values[l] = likelihood_ratio(instance.mu, instance.theta,
                                   decomp.parts[l].eta) *
                  cost.cost(decomp.parts[l].eta.probs);
    }
    // k > n posteriors are linearly dependent; any kernel direction keeps
    // both sum phi eta and sum phi fixed (coefficients sum to zero)
    Eigen::FullPivLU<Matrix> lu(etas);
    lu.setThreshold(1e-10);
    Matrix kernel = lu.kernel();
    if (kernel.cols() == 0 || kernel.col(0).cwiseAbs().maxCoeff() < 1e-12)
      break;  // numerically independent; leave as is
    Vector dir = kernel.col(0);
    if (dir.dot(values) < 0.0) dir = -dir;  // never decrease revenue

    double step = std::numeric_limits<double>::infinity();
    for (int l = 0; l < k; ++l)
      if (dir[l] < -1e-14)
        step = std::min(step, decomp.parts[l].phi / -dir[l]);
    if (!std::isfinite(step)) {
      // direction has no negative entry; the opposite one must
      dir = -dir;
      step = std::numeric_limits<double>::infinity();
      for (int l = 0; l < k; ++l)
        if (dir[l] < -1e-14)
          step = std::min(step, decomp.parts[l].phi / -dir[l]);
      if (!std::isfinite(step)) break;
    }

    PosteriorDecomposition next;
    for (int l = 0; l < k; ++l) {
      double phi = decomp.parts[l].phi + step * dir[l];
      if (phi > 1e-12) next.parts.push_back({phi, decomp.parts[l].eta});
    }
    if (next.n_parts() >= k) break;  // no progress; bail out
    decomp = std::move(next);
  }
  return decomp;
}

double merge_gain(const SingleTypeInstance& instance,
                  const PosteriorDecomposition& decomp, int s_index,
                  int t_index) {
  const int k = decomp.n_parts();
  if (s_index < 0 || s_index >= k || t_index < 0 || t_index >= k ||
      s_index == t_index)
    throw ValidationError("merge_gain: part index out of range");
  const DecompositionPart& s = decomp.parts[s_index];
  const DecompositionPart& t = decomp.parts[t_index];
  if (s.phi <= 0.0 || t.phi <= 0.0)
    throw ValidationError("merge_gain: both parts need positive mass");
  CostModel cost = instance.cost_model();
  double phi_v = s.phi + t.phi;
  Vector eta_v = (s.phi * s.eta.probs + t.phi * t.eta.probs) / phi_v;
  double merged = phi_v * likelihood_ratio(instance.mu, instance.theta, eta_v) *
                  cost.cost(eta_v);
  double before =
      s.phi * likelihood_ratio(instance.mu, instance.theta, s.eta) *
          cost.cost(s.eta.probs) +
      t.phi * likelihood_ratio(instance.mu, instance.theta, t.eta) *
          cost.cost(t.eta.probs);
  return merged - before;
}

OptimalityReport check_optimality_conditions(
    const SingleTypeInstance& instance, const PosteriorDecomposition& decomp) {
  OptimalityReport out;
  const int k = decomp.n_parts();
  for (int s = 0; s < k; ++s)
    for (int t = s + 1; t < k; ++t)
      if (decomp.parts[s].phi > 0.0 && decomp.parts[t].phi > 0.0 &&
          merge_gain(instance, decomp, s, t) > 1e-7)
        out.improving_merges.emplace_back(s, t);

  int pieces = instance.cost_model().n_pieces();
  for (int s = 0; s < k; ++s) {
    int nnz = 0;
    for (long w = 0; w < decomp.parts[s].eta.probs.size(); ++w)
      if (decomp.parts[s].eta.probs[w] > 1e-7) ++nnz;
    if (nnz > 2 * pieces) out.dense_posteriors.push_back(s);
  }
  return out;
}

namespace {

// lower envelope of the cost lines on eta_1 (the probability of state 0):
// pieces are maximal intervals on which one line attains the min
struct BinaryEnvelope {
  std::vector<double> xs;      // piece boundaries, ascending, 0 and 1 included
  std::vector<int> piece_of;   // attaining line per piece, size xs.size()-1
  Vector at0, at1;             // line values at eta_1 = 0 and 1

  double value(double x) const {
    double best = std::numeric_limits<double>::infinity();
    for (long k = 0; k < at0.size(); ++k)
      best = std::min(best, at0[k] + x * (at1[k] - at0[k]));
    return best;
  }
};

BinaryEnvelope build_envelope(const CostModel& cost) {
  BinaryEnvelope env;
  const int pieces = cost.n_pieces();
  env.at0.resize(pieces);
  env.at1.resize(pieces);
  for (int k = 0; k < pieces; ++k) {
    env.at0[k] = cost.coeffs(1, k);  // eta = (0, 1)
    env.at1[k] = cost.coeffs(0, k);  // eta = (1, 0)
  }
  std::vector<double> candidates = {0.0, 1.0};
  for (int a = 0; a < pieces; ++a) {
    for (int b = a + 1; b < pieces; ++b) {
      double denom = (env.at1[a] - env.at0[a]) - (env.at1[b] - env.at0[b]);
      if (std::abs(denom) < 1e-14) continue;
      double x = (env.at0[b] - env.at0[a]) / denom;
      if (x > 1e-12 && x < 1.0 - 1e-12) candidates.push_back(x);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end(),
                               [](double a, double b) {
                                 return std::abs(a - b) < 1e-12;
                               }),
                   candidates.end());

  // merge consecutive cells sharing the attaining line
  std::vector<double> xs;
  std::vector<int> piece_of;
  for (size_t i = 0; i + 1 < candidates.size(); ++i) {
    double mid = 0.5 * (candidates[i] + candidates[i + 1]);
    int arg = 0;
    double best = env.at0[0] + mid * (env.at1[0] - env.at0[0]);
    for (int k = 1; k < pieces; ++k) {
      double v = env.at0[k] + mid * (env.at1[k] - env.at0[k]);
      if (v < best - 1e-15) {
        best = v;
        arg = k;
      }
    }
    if (!piece_of.empty() && piece_of.back() == arg) {
      xs.back() = candidates[i + 1];
      continue;
    }
    if (xs.empty()) xs.push_back(candidates[i]);
    xs.push_back(candidates[i + 1]);
    piece_of.push_back(arg);
  }
  env.xs = std::move(xs);
  env.piece_of = std::move(piece_of);
  return env;
}

}  // namespace

SolveReport solve_binary(const SingleTypeInstance& instance) {
  if (instance.problem.n_states != 2)
    throw ValidationError("solve_binary requires exactly two states");
  CostModel cost = instance.cost_model();
  BinaryEnvelope env = build_envelope(cost);

  const double rho0 = instance.mu[0] / instance.theta[0];
  const double rho1 = instance.mu[1] / instance.theta[1];
  auto ratio = [&](double x) { return rho1 + x * (rho0 - rho1); };
  auto f = [&](double x) { return ratio(x) * env.value(x); };

  const double theta0 = instance.theta[0];

  // candidate support points: envelope vertices plus per-(vertex, piece)
  // tangency roots of the quadratic f on the piece
  std::vector<double> verts = env.xs;
  std::vector<double> points = verts;
  for (double v : verts) {
    double fv = f(v);
    for (size_t p = 0; p < env.piece_of.size(); ++p) {
      double l = env.xs[p], r = env.xs[p + 1];
      int line = env.piece_of[p];
      double c0 = env.at0[line];
      double c1 = env.at1[line] - env.at0[line];
      // f on this piece: (rho1 + x (rho0 - rho1)) (c0 + c1 x) = a x^2 + b x + c
      double a = (rho0 - rho1) * c1;
      double b = rho1 * c1 + (rho0 - rho1) * c0;
      double c = rho1 * c0;
      if (std::abs(a) < 1e-14) continue;  // linear piece: endpoints suffice
      // tangency through (v, f(v)): a t^2 - 2 a v t + (f(v) - b v - c) = 0
      double disc = v * v - (fv - b * v - c) / a;
      if (disc < 0.0) continue;
      double root = std::sqrt(disc);
      for (double t : {v - root, v + root})
        if (t > l - 1e-12 && t < r + 1e-12)
          points.push_back(std::clamp(t, l, r));
    }
  }

  // best one- or two-signal rule: no split, or a (vertex, point) chord
  // through theta
  double best_rev = f(theta0);
  double best_v = theta0, best_t = theta0;
  for (double v : verts) {
    for (double t : points) {
      if (std::abs(t - v) < 1e-12) continue;
      double lo = std::min(v, t), hi = std::max(v, t);
      if (theta0 < lo - 1e-12 || theta0 > hi + 1e-12) continue;
      double w = std::clamp((theta0 - t) / (v - t), 0.0, 1.0);
      double rev = w * f(v) + (1.0 - w) * f(t);
      if (rev > best_rev + 1e-12) {
        best_rev = rev;
        best_v = v;
        best_t = t;
      }
    }
  }

  PosteriorDecomposition decomp;
  auto as_belief = [](double x) {
    Belief b;
    b.probs = Vector(2);
    b.probs << x, 1.0 - x;
    return b;
  };
  if (std::abs(best_v - best_t) < 1e-12) {
    decomp.parts.push_back({1.0, as_belief(theta0)});
  } else {
    double w = std::clamp((theta0 - best_t) / (best_v - best_t), 0.0, 1.0);
    if (w > 1e-12) decomp.parts.push_back({w, as_belief(best_v)});
    if (1.0 - w > 1e-12) decomp.parts.push_back({1.0 - w, as_belief(best_t)});
  }

  SolveReport report;
  report.decomposition = decomp;
  report.rule = decomposition_to_rule(instance, decomp);
  report.revenue = decomposition_revenue(instance, decomp);
  report.diagnostics.status = "closed_form";
  report.diagnostics.max_constraint_violation =
      (decomp.barycenter() - instance.theta.probs).cwiseAbs().maxCoeff();
  OptimalityReport opt = check_optimality_conditions(instance, decomp);
  report.diagnostics.merge_flags = static_cast<int>(opt.improving_merges.size());
  report.diagnostics.sparsity_flags = static_cast<int>(opt.dense_posteriors.size());
  return report;
}

double no_disclosure_revenue(const SingleTypeInstance& instance) {
  return instance.cost_model().cost(instance.theta.probs);
}

PosteriorDecomposition common_prior_decomposition(
    const SingleTypeInstance& instance) {
  CostModel cost = instance.cost_model();
  int piece = cost.best_piece(instance.theta.probs);
  std::vector<Vector> verts = enumerate_vertices(cost, piece);
  if (verts.empty()) throw SolverError("best-response polytope has no vertices");

  lp::Problem fp;
  fp.c = lp::Vector::Zero(verts.size());
  fp.A.resize(instance.problem.n_states, verts.size());
  for (size_t k = 0; k < verts.size(); ++k) fp.A.col(k) = verts[k];
  fp.b = instance.theta.probs;
  fp.sense.assign(instance.problem.n_states, lp::Sense::Eq);
  lp::Solution sol = lp::solve(fp);
  if (sol.status != lp::Status::Optimal)
    throw SolverError("theta is not in the hull of its best-response vertices");

  PosteriorDecomposition decomp;
  for (size_t k = 0; k < verts.size(); ++k) {
    if (sol.x[k] <= 1e-12) continue;
    Belief b;
    b.probs = verts[k];
    decomp.parts.push_back({sol.x[k], std::move(b)});
  }
  return decomp;
}

}  // namespace optad
