#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "optad/geometry.hpp"
#include "optad/lp.hpp"
#include "testutil.hpp"

#include <algorithm>
#include <random>

using namespace optad;
using namespace testutil;

namespace {

bool contains_point(const std::vector<Vector>& set, std::initializer_list<double> coords) {
  Vector p(static_cast<long>(coords.size()));
  long i = 0;
  for (double c : coords) p[i++] = c;
  return std::any_of(set.begin(), set.end(), [&](const Vector& v) {
    return (v - p).cwiseAbs().maxCoeff() <= 1e-9;
  });
}

long binom(long n, long k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// independent route: the polytope vertices must equal the hull vertices of
// the in-polytope points of a fine simplex grid whenever they are
// grid-representable
std::vector<double> grid_hull_1d(const CostModel& cost, int piece, int m) {
  double lo = 2.0, hi = -1.0;
  for (int k = 0; k <= m; ++k) {
    Vector eta(2);
    eta << static_cast<double>(k) / m, 1.0 - static_cast<double>(k) / m;
    if (cost.piece_cost(piece, eta) <= cost.cost(eta) + 1e-12) {
      lo = std::min(lo, eta[0]);
      hi = std::max(hi, eta[0]);
    }
  }
  if (lo > hi) return {};
  if (lo == hi) return {lo};
  return {lo, hi};
}

}  // namespace

TEST_CASE("vertices of the binary guess game") {
  DecisionProblem guess = guess_game(2);
  auto v0 = enumerate_vertices(guess, 0);
  REQUIRE(v0.size() == 2);
  CHECK(contains_point(v0, {0.5, 0.5}));
  CHECK(contains_point(v0, {1.0, 0.0}));

  auto v1 = enumerate_vertices(guess, 1);
  REQUIRE(v1.size() == 2);
  CHECK(contains_point(v1, {0.5, 0.5}));
  CHECK(contains_point(v1, {0.0, 1.0}));

  VertexSet all = all_vertices(guess);
  REQUIRE(all.size() == 3);
  for (const Vertex& v : all.vertices) {
    if ((v.point - Vector::Constant(2, 0.5)).cwiseAbs().maxCoeff() < 1e-9) {
      CHECK(v.actions.size() == 2);
    } else {
      CHECK(v.actions.size() == 1);
    }
  }
}

TEST_CASE("vertices of the 3-state guess game") {
  DecisionProblem guess = guess_game(3);
  auto v0 = enumerate_vertices(guess, 0);
  REQUIRE(v0.size() == 4);
  CHECK(contains_point(v0, {1.0, 0.0, 0.0}));
  CHECK(contains_point(v0, {0.5, 0.5, 0.0}));
  CHECK(contains_point(v0, {0.5, 0.0, 0.5}));
  CHECK(contains_point(v0, {1.0 / 3, 1.0 / 3, 1.0 / 3}));
}

TEST_CASE("single action: the whole simplex") {
  DecisionProblem p = DecisionProblem::validated(Matrix::Constant(4, 1, 0.2));
  auto v = enumerate_vertices(p, 0);
  REQUIRE(v.size() == 4);
  for (int w = 0; w < 4; ++w)
    CHECK(contains_point(v, {w == 0 ? 1.0 : 0.0, w == 1 ? 1.0 : 0.0,
                             w == 2 ? 1.0 : 0.0, w == 3 ? 1.0 : 0.0}));
}

TEST_CASE("vertex sparsity, membership and the basis-count bound") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 2 + static_cast<int>(rng() % 4);  // up to 5 states
    int a = 1 + static_cast<int>(rng() % 4);
    DecisionProblem p = DecisionProblem::validated(random_utility(rng, n, a));
    CostModel cost = CostModel::from_problem(p);
    VertexEnumStats stats;
    VertexSet vs = all_vertices(p, {}, &stats);
    CHECK(stats.bases_examined <= a * binom(n + a - 1, a));
    CHECK(vs.size() <= a * binom(n + a - 1, a));
    for (const Vertex& v : vs.vertices) {
      CHECK(v.nnz <= a);
      CHECK(v.point.sum() == doctest::Approx(1.0).epsilon(1e-9));
      REQUIRE(!v.actions.empty());
      for (int tag : v.actions)
        for (int other = 0; other < a; ++other)
          CHECK(cost.piece_cost(tag, v.point) <=
                cost.piece_cost(other, v.point) + 1e-9);
    }
    // pairwise distinct
    for (int i = 0; i < vs.size(); ++i)
      for (int j = i + 1; j < vs.size(); ++j)
        CHECK((vs.vertices[i].point - vs.vertices[j].point)
                  .cwiseAbs()
                  .maxCoeff() > 1e-9);
  }
}

TEST_CASE("theta decomposes over its best-response vertices") {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + static_cast<int>(rng() % 3);
    int a = 1 + static_cast<int>(rng() % 3);
    SingleTypeInstance inst = random_single(rng, n, a);
    CostModel cost = inst.cost_model();
    int piece = cost.best_piece(inst.theta.probs);
    auto verts = enumerate_vertices(cost, piece);
    REQUIRE(!verts.empty());
    lp::Problem fp;
    fp.c = lp::Vector::Zero(verts.size());
    fp.A.resize(n, verts.size());
    for (size_t k = 0; k < verts.size(); ++k) fp.A.col(k) = verts[k];
    fp.b = inst.theta.probs;
    fp.sense.assign(n, lp::Sense::Eq);
    CHECK(lp::solve(fp).status == lp::Status::Optimal);
  }
}

TEST_CASE("segment set on the textbook instance") {
  SingleTypeInstance inst = textbook_binary_instance();
  VertexSet vs = all_vertices(inst.problem);
  SegmentSet segs = build_segments(inst, vs);

  auto locate = [&](double x0) {
    for (int i = 0; i < vs.size(); ++i)
      if (std::abs(vs.vertices[i].point[0] - x0) < 1e-9) return i;
    return -1;
  };
  int v_half = locate(0.5), v_one = locate(1.0), v_zero = locate(0.0);
  REQUIRE(v_half >= 0);
  REQUIRE(v_one >= 0);
  REQUIRE(v_zero >= 0);

  bool has_one_half = false, has_zero_half = false;
  int singletons = 0;
  for (const SegmentPair& p : segs.pairs) {
    if (p.i == p.j) {
      ++singletons;
      CHECK(p.slope_product == 0.0);
      continue;
    }
    CHECK(p.slope_product <= 1e-9);
    if ((p.i == v_half && p.j == v_one) || (p.i == v_one && p.j == v_half))
      has_one_half = true;
    if ((p.i == v_half && p.j == v_zero) || (p.i == v_zero && p.j == v_half))
      has_zero_half = true;
  }
  // (R, C) moves the same way between (1,0) and (.5,.5): excluded
  CHECK_FALSE(has_one_half);
  CHECK(has_zero_half);
  CHECK(singletons == vs.size());
}

TEST_CASE("single action problems keep every pair") {
  std::mt19937 rng(47);
  SingleTypeInstance inst = SingleTypeInstance::validated(
      DecisionProblem::validated(Matrix::Constant(3, 1, 0.4)),
      random_belief(rng, 3), random_belief(rng, 3));
  VertexSet vs = all_vertices(inst.problem);
  SegmentSet segs = build_segments(inst, vs);
  // C == 0 on all vertices: every slope product vanishes
  CHECK(segs.size() == vs.size() + vs.size() * (vs.size() - 1) / 2);
  for (const SegmentPair& p : segs.pairs)
    CHECK(p.slope_product == doctest::Approx(0.0));
}

TEST_CASE("grid-hull cross-check at grid-representable vertices") {
  // binary guess game: P_a boundaries at 0, 1/2, 1 are exactly on a 60-grid
  DecisionProblem guess = guess_game(2);
  CostModel cost = CostModel::from_problem(guess);
  for (int piece = 0; piece < 2; ++piece) {
    auto hull = grid_hull_1d(cost, piece, 60);
    auto enumerated = enumerate_vertices(guess, piece);
    REQUIRE(hull.size() == enumerated.size());
    std::sort(enumerated.begin(), enumerated.end(),
              [](const Vector& a, const Vector& b) { return a[0] < b[0]; });
    for (size_t k = 0; k < hull.size(); ++k)
      CHECK(enumerated[k][0] == doctest::Approx(hull[k]).epsilon(1e-9));
  }

  // random quantized utilities: enumerated vertices must cover the grid
  // hull endpoints to within one grid cell
  std::mt19937 rng(53);
  for (int trial = 0; trial < 15; ++trial) {
    DecisionProblem p =
        DecisionProblem::validated(quantized_utility(rng, 2, 3, 4));
    CostModel c = CostModel::from_problem(p);
    for (int piece = 0; piece < 3; ++piece) {
      auto hull = grid_hull_1d(c, piece, 240);
      auto enumerated = enumerate_vertices(p, piece);
      if (hull.empty()) continue;  // region can be empty or a sliver
      REQUIRE(!enumerated.empty());
      for (double endpoint : hull) {
        double best = 2.0;
        for (const Vector& v : enumerated)
          best = std::min(best, std::abs(v[0] - endpoint));
        CHECK(best <= 1.0 / 240 + 1e-9);
      }
    }
  }
}

TEST_CASE("basis cap aborts loudly") {
  std::mt19937 rng(59);
  // C(41, 12) index sets is far beyond any sensible cap
  DecisionProblem p = DecisionProblem::validated(random_utility(rng, 30, 12));
  VertexEnumOptions opts;
  opts.max_bases = 1000;
  CHECK_THROWS_AS(enumerate_vertices(p, 0, opts), CapExceeded);
}
