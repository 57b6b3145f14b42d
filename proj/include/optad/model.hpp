#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace optad {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Absolute tolerance for probability / simplex comparisons. Inputs within
// kProbTol of a valid simplex point are renormalized, anything worse is
// rejected.
inline constexpr double kProbTol = 1e-9;
inline constexpr double kTightTol = 1e-12;
// Buyers purchase at indifference: buy when C(eta) >= price - kBuyTol.
inline constexpr double kBuyTol = 1e-9;

// Error taxonomy mirrored by the CLI exit codes: ValidationError -> 2,
// SolverError -> 3, CapExceeded -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ValidationError : public Error {
 public:
  using Error::Error;
};
class SolverError : public Error {
 public:
  using Error::Error;
};
class CapExceeded : public Error {
 public:
  using Error::Error;
};

// Buyer decision problem: states Omega, actions A, utility u(omega, a) in
// [0,1] stored one row per state.
struct DecisionProblem {
  int n_states = 0;
  int n_actions = 0;
  Matrix utility;

  static DecisionProblem validated(Matrix utility);

  // u*(omega) = max_a u(omega, a)
  Vector best_utility() const;
  // regret column for action a: u*(omega) - u(omega, a)
  Vector regret(int action) const;
};

// Probability vector over states. `full_support` additionally requires
// every entry strictly positive (needed wherever we divide by theta).
struct Belief {
  Vector probs;

  static Belief simplex(Vector p);
  static Belief full_support(Vector p);
  static Belief point_mass(int n_states, int state);
  static Belief uniform(int n_states);

  int size() const { return static_cast<int>(probs.size()); }
  double operator[](int i) const { return probs[i]; }
};

// Piecewise-linear cost of uncertainty C(eta) = min_k coeffs.col(k) . eta.
// Built either from a decision problem (one piece per action, the regret
// lines) or from a single linear functional for converted disclosure
// instances, where C(e_i) = v_i need not vanish.
struct CostModel {
  Matrix coeffs;  // n_states x n_pieces
  bool is_linear = false;

  static CostModel from_problem(const DecisionProblem& problem);
  static CostModel from_linear(Vector values);

  int n_states() const { return static_cast<int>(coeffs.rows()); }
  int n_pieces() const { return static_cast<int>(coeffs.cols()); }
  double piece_cost(int piece, const Vector& eta) const;
  double cost(const Vector& eta) const;
  // lowest-index piece attaining the min
  int best_piece(const Vector& eta) const;
};

struct SingleTypeInstance {
  DecisionProblem problem;
  Belief mu;     // true distribution of the state
  Belief theta;  // targeted buyer prior, full support
  // set by the disclosure adapter: C(eta) = linear_cost . eta
  std::optional<Vector> linear_cost;

  static SingleTypeInstance validated(DecisionProblem problem, Belief mu,
                                      Belief theta,
                                      std::optional<Vector> linear_cost = {});

  CostModel cost_model() const;
  double cost(const Vector& eta) const { return cost_model().cost(eta); }
};

struct MultiTypeInstance {
  DecisionProblem problem;
  std::vector<Belief> types;  // the set Theta, pairwise distinct
  Matrix joint;               // mu(omega, theta), n_states x n_types

  static MultiTypeInstance validated(DecisionProblem problem,
                                     std::vector<Belief> types, Matrix joint);

  int n_types() const { return static_cast<int>(types.size()); }
  Vector state_marginal() const;  // mu(omega)
  double type_mass(int type) const;
};

// One signal of an advertising rule: send probabilities pi(omega, s) per
// state plus the posted price for the full revelation after s.
struct SignalEntry {
  Vector pi_given_omega;
  double price = 0.0;
};

struct AdvertisingRule {
  std::vector<SignalEntry> signals;

  static AdvertisingRule validated(std::vector<SignalEntry> signals);

  int n_signals() const { return static_cast<int>(signals.size()); }
  int n_states() const {
    return signals.empty() ? 0
                           : static_cast<int>(signals[0].pi_given_omega.size());
  }
};

// Buyer-view representation of a rule: posteriors eta^s with receive
// probabilities phi_s, sum phi_s eta^s = theta.
struct DecompositionPart {
  double phi = 0.0;
  Belief eta;
};

struct PosteriorDecomposition {
  std::vector<DecompositionPart> parts;

  int n_parts() const { return static_cast<int>(parts.size()); }
  // sum_s phi_s eta^s
  Vector barycenter() const;
};

// argmax_a E_{omega~eta} u(omega, a), ties broken by lowest action index
int best_action(const DecisionProblem& problem, const Belief& eta);

// C(eta) = min_a sum_omega eta_omega (u*(omega) - u(omega, a))
double cost_of_uncertainty(const DecisionProblem& problem, const Belief& eta);

// R(eta) = sum_omega mu_omega eta_omega / theta_omega; R(theta) = 1
double likelihood_ratio(const Belief& mu, const Belief& theta,
                        const Belief& eta);
double likelihood_ratio(const Belief& mu, const Belief& theta,
                        const Vector& eta);

// Bayes update of theta after observing the given signal. Returns
// (phi_theta(s), eta^s); throws ValidationError if the signal has zero
// probability under theta (undefined posterior).
std::pair<double, Belief> posterior(const Belief& theta,
                                    const AdvertisingRule& rule,
                                    int signal_index);

// Expected revenue per buyer for the targeted type:
// sum_s phi_mu(s) p_s 1{C(eta^s) >= p_s - kBuyTol}
double evaluate_rule_single(const SingleTypeInstance& instance,
                            const AdvertisingRule& rule);

// Expected revenue over the joint distribution mu(omega, theta).
double evaluate_rule_multi(const MultiTypeInstance& instance,
                           const AdvertisingRule& rule);

// pi(omega, s) = phi_s eta^s_omega / theta_omega, p_s = C(eta^s)
AdvertisingRule decomposition_to_rule(const SingleTypeInstance& instance,
                                      const PosteriorDecomposition& decomp);

// Buyer-view decomposition of a rule; signals with phi_theta(s) = 0 are
// dropped (they contribute no revenue from the targeted type).
PosteriorDecomposition rule_to_decomposition(const SingleTypeInstance& instance,
                                             const AdvertisingRule& rule);

// Revenue of a decomposition under prices p_s = C(eta^s):
// sum_s phi_s R(eta^s) C(eta^s).
double decomposition_revenue(const SingleTypeInstance& instance,
                             const PosteriorDecomposition& decomp);

// One prospect of a disclosure problem: realization probability p,
// sender profitability pi, receiver value v in [0,1].
struct Prospect {
  double probability = 0.0;
  double profit = 0.0;
  double value = 0.0;
};

struct DisclosureConversion {
  SingleTypeInstance instance;
  double scale = 1.0;  // M: solver revenue * M = sender expected payoff
};

// Maps a disclosure problem onto a single-type advertising instance:
// theta_i = p_i, mu_i = theta_i pi_i M with sum theta_i pi_i M = 1, and
// linear cost C(eta) = sum_i eta_i v_i.
DisclosureConversion convert_disclosure(const std::vector<Prospect>& prospects);

}  // namespace optad
