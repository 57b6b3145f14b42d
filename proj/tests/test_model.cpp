#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "optad/model.hpp"
#include "testutil.hpp"

#include <random>

using namespace optad;
using namespace testutil;

TEST_CASE("best_action picks the dominant coordinate and breaks ties low") {
  DecisionProblem guess = guess_game(2);
  CHECK(best_action(guess, belief2(0.9, 0.1)) == 0);
  CHECK(best_action(guess, belief2(0.1, 0.9)) == 1);

  DecisionProblem constant =
      DecisionProblem::validated(Matrix::Constant(3, 4, 0.7));
  CHECK(best_action(constant, belief3(0.2, 0.3, 0.5)) == 0);

  // indifference at the uniform posterior
  CHECK(best_action(guess, belief2(0.5, 0.5)) == 0);

  Belief wrong = belief3(1.0 / 3, 1.0 / 3, 1.0 / 3);
  CHECK_THROWS_AS(best_action(guess, wrong), ValidationError);
}

TEST_CASE("cost_of_uncertainty matches hand-computed values") {
  DecisionProblem guess2 = guess_game(2);
  CHECK(cost_of_uncertainty(guess2, belief2(0.5, 0.5)) == doctest::Approx(0.5));
  CHECK(cost_of_uncertainty(guess2, belief2(0.8, 0.2)) == doctest::Approx(0.2));

  // three-action enumeration by hand: regret of guessing a is 1 - eta_a
  DecisionProblem guess3 = guess_game(3);
  CHECK(cost_of_uncertainty(guess3, belief3(1.0 / 3, 1.0 / 3, 1.0 / 3)) ==
        doctest::Approx(2.0 / 3));

  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    DecisionProblem p = DecisionProblem::validated(random_utility(rng, 4, 3));
    for (int w = 0; w < 4; ++w)
      CHECK(cost_of_uncertainty(p, Belief::point_mass(4, w)) ==
            doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("cost of uncertainty is concave and bounded") {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    DecisionProblem p = DecisionProblem::validated(random_utility(rng, 4, 3));
    Belief x = random_belief(rng, 4), y = random_belief(rng, 4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double lam = u(rng);
    Belief mix;
    mix.probs = lam * x.probs + (1.0 - lam) * y.probs;
    double lhs = cost_of_uncertainty(p, mix);
    double rhs = lam * cost_of_uncertainty(p, x) +
                 (1.0 - lam) * cost_of_uncertainty(p, y);
    CHECK(lhs >= rhs - 1e-9);
    CHECK(lhs >= 0.0);
    CHECK(lhs <= 1.0);
  }
}

TEST_CASE("likelihood ratio: R(theta) = 1 and affinity") {
  Belief mu = belief2(0.5, 0.5), theta = belief2(0.8, 0.2);
  CHECK(likelihood_ratio(mu, theta, theta) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(likelihood_ratio(mu, theta, belief2(0.5, 0.5)) ==
        doctest::Approx(1.5625));
  CHECK(likelihood_ratio(mu, theta, belief2(1.0, 0.0)) ==
        doctest::Approx(0.625));

  std::mt19937 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    Belief m = random_belief(rng, 3), t = random_belief(rng, 3);
    CHECK(likelihood_ratio(m, t, t) == doctest::Approx(1.0).epsilon(1e-12));
    Belief e1 = random_belief(rng, 3), e2 = random_belief(rng, 3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double lam = u(rng);
    Vector mix = lam * e1.probs + (1.0 - lam) * e2.probs;
    double direct = likelihood_ratio(m, t, mix);
    double split = lam * likelihood_ratio(m, t, e1) +
                   (1.0 - lam) * likelihood_ratio(m, t, e2);
    CHECK(direct == doctest::Approx(split).epsilon(1e-12));
  }

  Vector zero_theta(2);
  zero_theta << 1.0, 0.0;
  Belief bad;
  bad.probs = zero_theta;  // bypass full_support to hit the runtime guard
  CHECK_THROWS_AS(likelihood_ratio(mu, bad, theta), ValidationError);
}

TEST_CASE("posterior update") {
  Belief theta = belief2(0.8, 0.2);

  SignalEntry all;
  all.pi_given_omega = Vector::Ones(2);
  all.price = 0.0;
  AdvertisingRule uninformative = AdvertisingRule::validated({all});
  auto [phi, eta] = posterior(theta, uninformative, 0);
  CHECK(phi == doctest::Approx(1.0));
  CHECK(eta.probs[0] == doctest::Approx(0.8));

  AdvertisingRule opt = textbook_binary_rule();
  auto [phi_s, eta_s] = posterior(theta, opt, 0);
  CHECK(phi_s == doctest::Approx(0.4));
  CHECK(eta_s.probs[0] == doctest::Approx(0.5));
  CHECK(eta_s.probs[1] == doctest::Approx(0.5));
  auto [phi_t, eta_t] = posterior(theta, opt, 1);
  CHECK(phi_t == doctest::Approx(0.6));
  CHECK(eta_t.probs[0] == doctest::Approx(1.0));

  // fully revealing: one signal per state
  SignalEntry s0, s1;
  s0.pi_given_omega = Vector(2);
  s0.pi_given_omega << 1.0, 0.0;
  s1.pi_given_omega = Vector(2);
  s1.pi_given_omega << 0.0, 1.0;
  AdvertisingRule revealing = AdvertisingRule::validated({s0, s1});
  auto [p0, e0] = posterior(theta, revealing, 0);
  CHECK(p0 == doctest::Approx(0.8));
  CHECK(e0.probs[0] == doctest::Approx(1.0));

  // zero-probability signal has no posterior
  Belief point;
  point.probs = Vector(2);
  point.probs << 0.0, 1.0;
  CHECK_THROWS_WITH_AS(posterior(point, revealing, 0),
                       doctest::Contains("undefined posterior"),
                       ValidationError);
}

TEST_CASE("evaluate_rule_single on the textbook instance") {
  SingleTypeInstance inst = textbook_binary_instance();
  CHECK(evaluate_rule_single(inst, textbook_binary_rule()) ==
        doctest::Approx(0.3125));

  SignalEntry all;
  all.pi_given_omega = Vector::Ones(2);
  all.price = 0.2;  // C(theta)
  CHECK(evaluate_rule_single(inst, AdvertisingRule::validated({all})) ==
        doctest::Approx(0.2));

  // nobody buys above the willingness to pay
  all.price = 1.0;
  CHECK(evaluate_rule_single(inst, AdvertisingRule::validated({all})) ==
        doctest::Approx(0.0));
  all.price = 1.5;  // prices outside [0,1] are rejected outright
  CHECK_THROWS_AS(AdvertisingRule::validated({all}), ValidationError);
}

TEST_CASE("evaluate_rule_multi") {
  SingleTypeInstance single = textbook_binary_instance();
  MultiTypeInstance wrapped = MultiTypeInstance::validated(
      single.problem, {single.theta}, single.mu.probs);
  CHECK(evaluate_rule_multi(wrapped, textbook_binary_rule()) ==
        doctest::Approx(evaluate_rule_single(single, textbook_binary_rule())));

  // constant utility: information is worthless at any positive price
  std::mt19937 rng(17);
  DecisionProblem constant =
      DecisionProblem::validated(Matrix::Constant(2, 2, 0.3));
  MultiTypeInstance flat = MultiTypeInstance::validated(
      constant, {belief2(0.6, 0.4)}, belief2(0.5, 0.5).probs);
  for (int trial = 0; trial < 10; ++trial) {
    AdvertisingRule rule = random_rule(rng, 2, 3);
    bool positive = false;
    for (auto& s : rule.signals)
      if (s.price > 1e-9) positive = true;
    if (!positive) continue;
    CHECK(evaluate_rule_multi(flat, rule) == doctest::Approx(0.0));
  }

  // price zero earns nothing even when everyone buys
  SignalEntry s0, s1;
  s0.pi_given_omega = Vector(2);
  s0.pi_given_omega << 1.0, 0.0;
  s0.price = 0.0;
  s1.pi_given_omega = Vector(2);
  s1.pi_given_omega << 0.0, 1.0;
  s1.price = 0.0;
  CHECK(evaluate_rule_multi(wrapped, AdvertisingRule::validated({s0, s1})) ==
        doctest::Approx(0.0));
}

TEST_CASE("decomposition_to_rule reproduces the textbook signaling scheme") {
  SingleTypeInstance inst = textbook_binary_instance();
  PosteriorDecomposition decomp;
  decomp.parts.push_back({0.4, belief2(0.5, 0.5)});
  decomp.parts.push_back({0.6, belief2(1.0, 0.0)});
  AdvertisingRule rule = decomposition_to_rule(inst, decomp);
  REQUIRE(rule.n_signals() == 2);
  CHECK(rule.signals[0].pi_given_omega[0] == doctest::Approx(0.25));
  CHECK(rule.signals[0].pi_given_omega[1] == doctest::Approx(1.0));
  CHECK(rule.signals[1].pi_given_omega[0] == doctest::Approx(0.75));
  CHECK(rule.signals[1].pi_given_omega[1] == doctest::Approx(0.0));
  CHECK(rule.signals[0].price == doctest::Approx(0.5));
  CHECK(rule.signals[1].price == doctest::Approx(0.0));

  PosteriorDecomposition no_split;
  no_split.parts.push_back({1.0, inst.theta});
  AdvertisingRule flat = decomposition_to_rule(inst, no_split);
  CHECK(flat.signals[0].pi_given_omega.minCoeff() == doctest::Approx(1.0));
  CHECK(flat.signals[0].price == doctest::Approx(0.2));

  // infeasible decomposition is rejected
  PosteriorDecomposition wrong;
  wrong.parts.push_back({1.0, belief2(0.5, 0.5)});
  CHECK_THROWS_AS(decomposition_to_rule(inst, wrong), ValidationError);
}

TEST_CASE("rule_to_decomposition and the round trip") {
  SingleTypeInstance inst = textbook_binary_instance();
  PosteriorDecomposition decomp =
      rule_to_decomposition(inst, textbook_binary_rule());
  REQUIRE(decomp.n_parts() == 2);
  CHECK(decomp.parts[0].phi == doctest::Approx(0.4));
  CHECK(decomp.parts[0].eta.probs[0] == doctest::Approx(0.5));
  CHECK(decomp.parts[1].phi == doctest::Approx(0.6));
  CHECK(decomp.parts[1].eta.probs[0] == doctest::Approx(1.0));

  SignalEntry all;
  all.pi_given_omega = Vector::Ones(2);
  all.price = 0.1;
  PosteriorDecomposition single =
      rule_to_decomposition(inst, AdvertisingRule::validated({all}));
  REQUIRE(single.n_parts() == 1);
  CHECK(single.parts[0].phi == doctest::Approx(1.0));

  // zero columns are dropped from the decomposition
  SignalEntry a, b;
  a.pi_given_omega = Vector::Ones(2);
  b.pi_given_omega = Vector::Zero(2);
  PosteriorDecomposition dropped =
      rule_to_decomposition(inst, AdvertisingRule::validated({a, b}));
  CHECK(dropped.n_parts() == 1);

  std::mt19937 rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    SingleTypeInstance random_inst = random_single(rng, 3, 3);
    AdvertisingRule rule = random_rule(rng, 3, 3);
    PosteriorDecomposition d = rule_to_decomposition(random_inst, rule);
    AdvertisingRule back = decomposition_to_rule(random_inst, d);
    PosteriorDecomposition d2 = rule_to_decomposition(random_inst, back);
    REQUIRE(d.n_parts() == d2.n_parts());
    for (int k = 0; k < d.n_parts(); ++k) {
      CHECK(d.parts[k].phi == doctest::Approx(d2.parts[k].phi).epsilon(1e-9));
      CHECK((d.parts[k].eta.probs - d2.parts[k].eta.probs)
                .cwiseAbs()
                .maxCoeff() <= 1e-9);
    }
  }
}

TEST_CASE("Bayes consistency and the ratio identity on random rules") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    SingleTypeInstance inst = random_single(rng, 4, 3);
    AdvertisingRule rule = random_rule(rng, 4, 4);
    Vector recomposed = Vector::Zero(4);
    for (int s = 0; s < rule.n_signals(); ++s) {
      double phi_theta = inst.theta.probs.dot(rule.signals[s].pi_given_omega);
      if (phi_theta <= 0.0) continue;
      auto [phi, eta] = posterior(inst.theta, rule, s);
      recomposed += phi * eta.probs;
      double phi_mu = inst.mu.probs.dot(rule.signals[s].pi_given_omega);
      CHECK(phi_mu / phi ==
            doctest::Approx(likelihood_ratio(inst.mu, inst.theta, eta))
                .epsilon(1e-9));
    }
    CHECK((recomposed - inst.theta.probs).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("decomposition revenue matches rule evaluation at C-prices") {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    SingleTypeInstance inst = random_single(rng, 3, 3);
    AdvertisingRule rule = random_rule(rng, 3, 3);
    PosteriorDecomposition decomp = rule_to_decomposition(inst, rule);
    AdvertisingRule priced = decomposition_to_rule(inst, decomp);
    CHECK(decomposition_revenue(inst, decomp) ==
          doctest::Approx(evaluate_rule_single(inst, priced)).epsilon(1e-9));
  }
}

TEST_CASE("convert_disclosure") {
  auto conv = convert_disclosure(
      {{0.5, 1.0, 0.3}, {0.5, 1.0, 0.7}});
  CHECK(conv.scale == doctest::Approx(1.0));
  CHECK(conv.instance.mu.probs[0] == doctest::Approx(0.5));
  CHECK(conv.instance.theta.probs[0] == doctest::Approx(0.5));
  REQUIRE(conv.instance.linear_cost.has_value());
  CHECK((*conv.instance.linear_cost)[1] == doctest::Approx(0.7));

  // equal profitabilities: mu = theta, M = 1/c
  auto equal = convert_disclosure(
      {{0.3, 2.0, 0.1}, {0.7, 2.0, 0.9}});
  CHECK(equal.scale == doctest::Approx(0.5));
  CHECK((equal.instance.mu.probs - equal.instance.theta.probs)
            .cwiseAbs()
            .maxCoeff() <= 1e-12);

  auto skewed = convert_disclosure(
      {{0.5, 2.0, 0.5}, {0.5, 0.0, 0.5}});
  CHECK(skewed.scale == doctest::Approx(1.0));
  CHECK(skewed.instance.mu.probs[0] == doctest::Approx(1.0));
  CHECK(skewed.instance.mu.probs[1] == doctest::Approx(0.0));

  CHECK_THROWS_AS(convert_disclosure({{0.5, 0.0, 0.5}, {0.5, 0.0, 0.5}}),
                  ValidationError);
  CHECK_THROWS_AS(convert_disclosure({{-0.1, 1.0, 0.5}, {1.1, 1.0, 0.5}}),
                  ValidationError);
}

TEST_CASE("merge-gain lower bound identity") {
  // checked against the closed form through model quantities only; the
  // solver-side merge_gain has its own tests
  std::mt19937 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    SingleTypeInstance inst = random_single(rng, 3, 2);
    AdvertisingRule rule = random_rule(rng, 3, 3);
    PosteriorDecomposition d = rule_to_decomposition(inst, rule);
    if (d.n_parts() < 2) continue;
    const auto& s = d.parts[0];
    const auto& t = d.parts[1];
    double phi_v = s.phi + t.phi;
    Vector eta_v = (s.phi * s.eta.probs + t.phi * t.eta.probs) / phi_v;
    CostModel cost = inst.cost_model();
    double merged = phi_v * likelihood_ratio(inst.mu, inst.theta, eta_v) *
                    cost.cost(eta_v);
    double rs = likelihood_ratio(inst.mu, inst.theta, s.eta);
    double rt = likelihood_ratio(inst.mu, inst.theta, t.eta);
    double cs = cost.cost(s.eta.probs), ct = cost.cost(t.eta.probs);
    double gain = merged - s.phi * rs * cs - t.phi * rt * ct;
    double bound = -(s.phi * t.phi / phi_v) * (rs - rt) * (cs - ct);
    CHECK(gain >= bound - 1e-9);
  }
}

TEST_CASE("merge gain is exact on a shared best-response region") {
  // both posteriors keep action 0 optimal, so C is linear between them and
  // the lower bound holds with equality
  SingleTypeInstance inst = textbook_binary_instance();
  CostModel cost = inst.cost_model();
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int trial = 0; trial < 30; ++trial) {
    Belief s = belief2(0.5 + 0.5 * u(rng), 0.0);
    s.probs[1] = 1.0 - s.probs[0];
    Belief t = belief2(0.5 + 0.5 * u(rng), 0.0);
    t.probs[1] = 1.0 - t.probs[0];
    double phi_s = u(rng), phi_t = u(rng);
    double phi_v = phi_s + phi_t;
    Vector eta_v = (phi_s * s.probs + phi_t * t.probs) / phi_v;
    double rs = likelihood_ratio(inst.mu, inst.theta, s);
    double rt = likelihood_ratio(inst.mu, inst.theta, t);
    double cs = cost.cost(s.probs), ct = cost.cost(t.probs);
    double gain = phi_v * likelihood_ratio(inst.mu, inst.theta, eta_v) *
                      cost.cost(eta_v) -
                  phi_s * rs * cs - phi_t * rt * ct;
    double bound = -(phi_s * phi_t / phi_v) * (rs - rt) * (cs - ct);
    CHECK(gain == doctest::Approx(bound).epsilon(1e-9));
  }
}

TEST_CASE("belief validation renormalizes near-simplex inputs only") {
  Vector near(2);
  near << 0.8 + 4e-10, 0.2;
  CHECK(Belief::simplex(near).probs.sum() == doctest::Approx(1.0).epsilon(1e-15));
  Vector off(2);
  off << 0.8, 0.3;
  CHECK_THROWS_AS(Belief::simplex(off), ValidationError);
  Vector negative(2);
  negative << 1.2, -0.2;
  CHECK_THROWS_AS(Belief::simplex(negative), ValidationError);
}
