#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "optad/lp.hpp"

#include <random>

using optad::lp::Problem;
using optad::lp::Sense;
using optad::lp::Solution;
using optad::lp::Status;
using optad::lp::Vector;

namespace {

Problem make(int n_vars, int n_rows) {
  Problem p;
  p.c = Vector::Zero(n_vars);
  p.A.setZero(n_rows, n_vars);
  p.b = Vector::Zero(n_rows);
  p.sense.assign(n_rows, Sense::Eq);
  return p;
}

}  // namespace

TEST_CASE("bounded maximization with inequality rows") {
  // max 3x + 2y s.t. x + y <= 4, x + 3y <= 6
  Problem p = make(2, 2);
  p.c << 3, 2;
  p.A << 1, 1, 1, 3;
  p.b << 4, 6;
  p.sense = {Sense::Le, Sense::Le};
  Solution s = optad::lp::solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(12.0));
  CHECK(s.x[0] == doctest::Approx(4.0));
  CHECK(s.x[1] == doctest::Approx(0.0));
  // binding first row: dual 3; slack second row: dual 0
  CHECK(s.duals[0] == doctest::Approx(3.0));
  CHECK(s.duals[1] == doctest::Approx(0.0));
}

TEST_CASE("equality rows and duals") {
  // max 5a + 4b + 2c s.t. a + b + c = 1
  Problem p = make(3, 1);
  p.c << 5, 4, 2;
  p.A << 1, 1, 1;
  p.b << 1;
  Solution s = optad::lp::solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(5.0));
  CHECK(s.duals[0] == doctest::Approx(5.0));
}

TEST_CASE("infeasible and unbounded detection") {
  Problem p = make(1, 2);
  p.c << 1;
  p.A << 1, 1;
  p.b << 1, 2;
  p.sense = {Sense::Eq, Sense::Eq};
  CHECK(optad::lp::solve(p).status == Status::Infeasible);

  Problem q = make(2, 1);
  q.c << 1, 0;
  q.A << 0, 1;
  q.b << 1;
  q.sense = {Sense::Le};
  CHECK(optad::lp::solve(q).status == Status::Unbounded);
}

TEST_CASE("homogeneous >= rows start feasible") {
  // max x + y s.t. x + y <= 1, x - y >= 0
  Problem p = make(2, 2);
  p.c << 1, 1;
  p.A << 1, 1, 1, -1;
  p.b << 1, 0;
  p.sense = {Sense::Le, Sense::Ge};
  Solution s = optad::lp::solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(1.0));
  CHECK(s.x[0] >= s.x[1] - 1e-9);
}

TEST_CASE("redundant equality rows are tolerated") {
  // the simplex-coordinate row plus the implied total-mass row
  Problem p = make(3, 3);
  p.c << 1, 2, 3;
  p.A << 1, 0, 0.5, 0, 1, 0.5, 1, 1, 1;
  p.b << 0.4, 0.6, 1.0;
  Solution s = optad::lp::solve(p);
  REQUIRE(s.status == Status::Optimal);
  // x3 <= 0.8 from the first row; objective 1.6 + 1.5 x3 peaks there
  CHECK(s.objective == doctest::Approx(2.8));
  CHECK(s.x[2] == doctest::Approx(0.8));
}

TEST_CASE("negative rhs rows are normalized") {
  // max -x s.t. -x <= -2  (i.e. x >= 2)
  Problem p = make(1, 1);
  p.c << -1;
  p.A << -1;
  p.b << -2;
  p.sense = {Sense::Le};
  Solution s = optad::lp::solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.x[0] == doctest::Approx(2.0));
  CHECK(s.objective == doctest::Approx(-2.0));
}

TEST_CASE("random LPs satisfy weak duality against a feasible point") {
  std::mt19937 rng(71);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 4, m = 3;
    Problem p = make(n, m);
    Vector x0(n);
    for (int j = 0; j < n; ++j) {
      p.c[j] = u(rng) - 0.3;
      x0[j] = u(rng);
    }
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) p.A(i, j) = u(rng);
    // rhs chosen so x0 is feasible for <= rows
    p.b = p.A * x0;
    for (int i = 0; i < m; ++i) p.b[i] += u(rng);
    p.sense.assign(m, Sense::Le);
    Solution s = optad::lp::solve(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.objective >= p.c.dot(x0) - 1e-9);
    // dual feasibility: c_j <= y . A_j for every column, y >= 0
    for (int i = 0; i < m; ++i) CHECK(s.duals[i] >= -1e-9);
    for (int j = 0; j < n; ++j)
      CHECK(p.c[j] <= s.duals.dot(p.A.col(j)) + 1e-8);
    // strong duality
    CHECK(s.objective == doctest::Approx(s.duals.dot(p.b)).epsilon(1e-8));
  }
}
