#include "optad/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace optad {

namespace {

std::string dim_msg(const char* what, long got, long want) {
  std::ostringstream os;
  os << what << ": got length " << got << ", expected " << want;
  return os.str();
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

}  // namespace

DecisionProblem DecisionProblem::validated(Matrix utility) {
  require(utility.rows() >= 1 && utility.cols() >= 1,
          "utility matrix must have at least one state and one action");
  for (long w = 0; w < utility.rows(); ++w) {
    for (long a = 0; a < utility.cols(); ++a) {
      double u = utility(w, a);
      require(u >= -kProbTol && u <= 1.0 + kProbTol,
              "utility entries must lie in [0,1]");
      utility(w, a) = std::clamp(u, 0.0, 1.0);
    }
  }
  DecisionProblem p;
  p.n_states = static_cast<int>(utility.rows());
  p.n_actions = static_cast<int>(utility.cols());
  p.utility = std::move(utility);
  return p;
}

Vector DecisionProblem::best_utility() const {
  return utility.rowwise().maxCoeff();
}

Vector DecisionProblem::regret(int action) const {
  if (action < 0 || action >= n_actions)
    throw ValidationError("action index out of range");
  return best_utility() - utility.col(action);
}

Belief Belief::simplex(Vector p) {
  require(p.size() >= 1, "belief must have at least one entry");
  double sum = 0.0;
  for (long i = 0; i < p.size(); ++i) {
    require(p[i] >= -kProbTol, "belief entries must be nonnegative");
    p[i] = std::max(p[i], 0.0);
    sum += p[i];
  }
  require(std::abs(sum - 1.0) <= kProbTol,
          "belief entries must sum to 1 (within 1e-9)");
  p /= sum;
  Belief b;
  b.probs = std::move(p);
  return b;
}

Belief Belief::full_support(Vector p) {
  Belief b = simplex(std::move(p));
  for (long i = 0; i < b.probs.size(); ++i)
    require(b.probs[i] > 0.0, "belief must have full support");
  return b;
}

Belief Belief::point_mass(int n_states, int state) {
  Vector p = Vector::Zero(n_states);
  p[state] = 1.0;
  Belief b;
  b.probs = std::move(p);
  return b;
}

Belief Belief::uniform(int n_states) {
  Belief b;
  b.probs = Vector::Constant(n_states, 1.0 / n_states);
  return b;
}

CostModel CostModel::from_problem(const DecisionProblem& problem) {
  CostModel c;
  c.coeffs.resize(problem.n_states, problem.n_actions);
  Vector best = problem.best_utility();
  for (int a = 0; a < problem.n_actions; ++a)
    c.coeffs.col(a) = best - problem.utility.col(a);
  c.is_linear = false;
  return c;
}

CostModel CostModel::from_linear(Vector values) {
  CostModel c;
  c.coeffs.resize(values.size(), 1);
  c.coeffs.col(0) = values;
  c.is_linear = true;
  return c;
}

double CostModel::piece_cost(int piece, const Vector& eta) const {
  return coeffs.col(piece).dot(eta);
}

double CostModel::cost(const Vector& eta) const {
  double best = piece_cost(0, eta);
  for (int k = 1; k < n_pieces(); ++k)
    best = std::min(best, piece_cost(k, eta));
  return best;
}

int CostModel::best_piece(const Vector& eta) const {
  int arg = 0;
  double best = piece_cost(0, eta);
  for (int k = 1; k < n_pieces(); ++k) {
    double v = piece_cost(k, eta);
    if (v < best) {
      best = v;
      arg = k;
    }
  }
  return arg;
}

SingleTypeInstance SingleTypeInstance::validated(
    DecisionProblem problem, Belief mu, Belief theta,
    std::optional<Vector> linear_cost) {
  require(mu.size() == problem.n_states,
          dim_msg("mu", mu.size(), problem.n_states));
  require(theta.size() == problem.n_states,
          dim_msg("theta", theta.size(), problem.n_states));
  for (int w = 0; w < theta.size(); ++w)
    require(theta[w] > 0.0, "theta must have full support");
  if (linear_cost) {
    require(linear_cost->size() == problem.n_states,
            dim_msg("linear_cost", linear_cost->size(), problem.n_states));
    for (long i = 0; i < linear_cost->size(); ++i)
      require((*linear_cost)[i] >= -kProbTol && (*linear_cost)[i] <= 1.0 + kProbTol,
              "linear cost coefficients must lie in [0,1]");
  }
  SingleTypeInstance inst;
  inst.problem = std::move(problem);
  inst.mu = std::move(mu);
  inst.theta = std::move(theta);
  inst.linear_cost = std::move(linear_cost);
  return inst;
}

CostModel SingleTypeInstance::cost_model() const {
  if (linear_cost) return CostModel::from_linear(*linear_cost);
  return CostModel::from_problem(problem);
}

MultiTypeInstance MultiTypeInstance::validated(DecisionProblem problem,
                                               std::vector<Belief> types,
                                               Matrix joint) {
  require(!types.empty(), "at least one buyer type is required");
  for (const Belief& t : types) {
    require(t.size() == problem.n_states,
            dim_msg("type", t.size(), problem.n_states));
    for (int w = 0; w < t.size(); ++w)
      require(t[w] > 0.0, "every type must have full support");
  }
  for (size_t i = 0; i < types.size(); ++i)
    for (size_t j = i + 1; j < types.size(); ++j) {
      double diff = (types[i].probs - types[j].probs).cwiseAbs().maxCoeff();
      require(diff > kTightTol, "buyer types must be pairwise distinct");
    }
  require(joint.rows() == problem.n_states &&
              joint.cols() == static_cast<long>(types.size()),
          "joint must be n_states x n_types");
  double total = 0.0;
  for (long w = 0; w < joint.rows(); ++w)
    for (long t = 0; t < joint.cols(); ++t) {
      require(joint(w, t) >= -kProbTol, "joint entries must be nonnegative");
      joint(w, t) = std::max(joint(w, t), 0.0);
      total += joint(w, t);
    }
  require(std::abs(total - 1.0) <= kProbTol, "joint must sum to 1");
  joint /= total;

  MultiTypeInstance inst;
  inst.problem = std::move(problem);
  inst.types = std::move(types);
  inst.joint = std::move(joint);
  return inst;
}

Vector MultiTypeInstance::state_marginal() const {
  return joint.rowwise().sum();
}

double MultiTypeInstance::type_mass(int type) const {
  return joint.col(type).sum();
}

AdvertisingRule AdvertisingRule::validated(std::vector<SignalEntry> signals) {
  require(!signals.empty(), "rule must have at least one signal");
  long n = signals[0].pi_given_omega.size();
  for (const SignalEntry& s : signals) {
    require(s.pi_given_omega.size() == n,
            "all signals must cover the same state space");
    require(s.price >= -kProbTol && s.price <= 1.0 + kProbTol,
            "prices must lie in [0,1]");
  }
  for (long w = 0; w < n; ++w) {
    double row = 0.0;
    for (const SignalEntry& s : signals) {
      require(s.pi_given_omega[w] >= -kProbTol,
              "signal probabilities must be nonnegative");
      row += s.pi_given_omega[w];
    }
    require(std::abs(row - 1.0) <= kProbTol,
            "signal probabilities must sum to 1 in every state");
  }
  AdvertisingRule rule;
  rule.signals = std::move(signals);
  for (SignalEntry& s : rule.signals) {
    s.price = std::clamp(s.price, 0.0, 1.0);
    for (long w = 0; w < n; ++w)
      s.pi_given_omega[w] = std::max(s.pi_given_omega[w], 0.0);
  }
  return rule;
}

Vector PosteriorDecomposition::barycenter() const {
  if (parts.empty()) return Vector();
  Vector acc = Vector::Zero(parts[0].eta.size());
  for (const DecompositionPart& p : parts) acc += p.phi * p.eta.probs;
  return acc;
}

int best_action(const DecisionProblem& problem, const Belief& eta) {
  if (eta.size() != problem.n_states)
    throw ValidationError(dim_msg("eta", eta.size(), problem.n_states));
  int arg = 0;
  double best = eta.probs.dot(problem.utility.col(0));
  for (int a = 1; a < problem.n_actions; ++a) {
    double v = eta.probs.dot(problem.utility.col(a));
    if (v > best) {
      best = v;
      arg = a;
    }
  }
  return arg;
}

double cost_of_uncertainty(const DecisionProblem& problem, const Belief& eta) {
  if (eta.size() != problem.n_states)
    throw ValidationError(dim_msg("eta", eta.size(), problem.n_states));
  return CostModel::from_problem(problem).cost(eta.probs);
}

double likelihood_ratio(const Belief& mu, const Belief& theta,
                        const Vector& eta) {
  if (mu.size() != theta.size() || eta.size() != theta.probs.size())
    throw ValidationError("mu, theta, eta must have equal lengths");
  double r = 0.0;
  for (int w = 0; w < mu.size(); ++w) {
    if (theta[w] <= 0.0)
      throw ValidationError("theta must have full support");
    r += mu[w] * eta[w] / theta[w];
  }
  return r;
}

double likelihood_ratio(const Belief& mu, const Belief& theta,
                        const Belief& eta) {
  return likelihood_ratio(mu, theta, eta.probs);
}

std::pair<double, Belief> posterior(const Belief& theta,
                                    const AdvertisingRule& rule,
                                    int signal_index) {
  if (signal_index < 0 || signal_index >= rule.n_signals())
    throw ValidationError("signal index out of range");
  const Vector& pi = rule.signals[signal_index].pi_given_omega;
  if (pi.size() != theta.probs.size())
    throw ValidationError(dim_msg("theta", theta.size(), pi.size()));
  Vector numer = theta.probs.cwiseProduct(pi);
  double phi = numer.sum();
  if (phi <= 0.0)
    throw ValidationError(
        "undefined posterior: signal has zero probability under theta");
  Belief eta;
  eta.probs = numer / phi;
  return {phi, std::move(eta)};
}

double evaluate_rule_single(const SingleTypeInstance& instance,
                            const AdvertisingRule& rule) {
  if (rule.n_states() != instance.problem.n_states)
    throw ValidationError("rule does not match the instance state space");
  CostModel cost = instance.cost_model();
  double revenue = 0.0;
  for (int s = 0; s < rule.n_signals(); ++s) {
    const SignalEntry& sig = rule.signals[s];
    double phi_theta = instance.theta.probs.dot(sig.pi_given_omega);
    if (phi_theta <= 0.0) continue;  // zero column: never sent
    Vector eta = instance.theta.probs.cwiseProduct(sig.pi_given_omega) / phi_theta;
    if (cost.cost(eta) >= sig.price - kBuyTol) {
      double phi_mu = instance.mu.probs.dot(sig.pi_given_omega);
      revenue += phi_mu * sig.price;
    }
  }
  return revenue;
}

double evaluate_rule_multi(const MultiTypeInstance& instance,
                           const AdvertisingRule& rule) {
  if (rule.n_states() != instance.problem.n_states)
    throw ValidationError("rule does not match the instance state space");
  CostModel cost = CostModel::from_problem(instance.problem);
  double revenue = 0.0;
  for (const SignalEntry& sig : rule.signals) {
    for (int t = 0; t < instance.n_types(); ++t) {
      double phi_theta = instance.types[t].probs.dot(sig.pi_given_omega);
      if (phi_theta <= 0.0) continue;
      Vector eta =
          instance.types[t].probs.cwiseProduct(sig.pi_given_omega) / phi_theta;
      if (cost.cost(eta) >= sig.price - kBuyTol) {
        // mass of (state, this type) reaching the signal
        double mass = instance.joint.col(t).dot(sig.pi_given_omega);
        revenue += mass * sig.price;
      }
    }
  }
  return revenue;
}

AdvertisingRule decomposition_to_rule(const SingleTypeInstance& instance,
                                      const PosteriorDecomposition& decomp) {
  if (decomp.parts.empty())
    throw ValidationError("decomposition must have at least one part");
  Vector bary = decomp.barycenter();
  if ((bary - instance.theta.probs).cwiseAbs().maxCoeff() > kProbTol)
    throw ValidationError("decomposition is infeasible for theta");
  CostModel cost = instance.cost_model();
  std::vector<SignalEntry> signals;
  signals.reserve(decomp.parts.size());
  for (const DecompositionPart& part : decomp.parts) {
    SignalEntry sig;
    sig.pi_given_omega =
        part.phi * part.eta.probs.cwiseQuotient(instance.theta.probs);
    sig.price = std::clamp(cost.cost(part.eta.probs), 0.0, 1.0);
    signals.push_back(std::move(sig));
  }
  // rows sum to theta_w / theta_w = 1 up to the decomposition tolerance;
  // rescale exactly before validation
  int n = instance.problem.n_states;
  for (int w = 0; w < n; ++w) {
    double row = 0.0;
    for (const SignalEntry& s : signals) row += s.pi_given_omega[w];
    for (SignalEntry& s : signals) s.pi_given_omega[w] /= row;
  }
  return AdvertisingRule::validated(std::move(signals));
}

PosteriorDecomposition rule_to_decomposition(const SingleTypeInstance& instance,
                                             const AdvertisingRule& rule) {
  if (rule.n_states() != instance.problem.n_states)
    throw ValidationError("rule does not match the instance state space");
  PosteriorDecomposition decomp;
  for (int s = 0; s < rule.n_signals(); ++s) {
    double phi = instance.theta.probs.dot(rule.signals[s].pi_given_omega);
    if (phi <= 0.0) continue;  // dropped: zero probability under theta
    auto [phi_s, eta] = posterior(instance.theta, rule, s);
    decomp.parts.push_back({phi_s, std::move(eta)});
  }
  return decomp;
}

double decomposition_revenue(const SingleTypeInstance& instance,
                             const PosteriorDecomposition& decomp) {
  CostModel cost = instance.cost_model();
  double revenue = 0.0;
  for (const DecompositionPart& part : decomp.parts) {
    double r = likelihood_ratio(instance.mu, instance.theta, part.eta);
    revenue += part.phi * r * cost.cost(part.eta.probs);
  }
  return revenue;
}

DisclosureConversion convert_disclosure(
    const std::vector<Prospect>& prospects) {
  if (prospects.empty())
    throw ValidationError("at least one prospect is required");
  int n = static_cast<int>(prospects.size());
  Vector p(n), profit(n), value(n);
  double psum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (prospects[i].probability <= 0.0)
      throw ValidationError("prospect probabilities must be positive");
    if (prospects[i].profit < 0.0)
      throw ValidationError("prospect profitabilities must be nonnegative");
    if (prospects[i].value < -kProbTol || prospects[i].value > 1.0 + kProbTol)
      throw ValidationError("prospect values must lie in [0,1]");
    p[i] = prospects[i].probability;
    profit[i] = prospects[i].profit;
    value[i] = std::clamp(prospects[i].value, 0.0, 1.0);
    psum += p[i];
  }
  if (std::abs(psum - 1.0) > kProbTol)
    throw ValidationError("prospect probabilities must sum to 1");
  p /= psum;

  double normalizer = p.dot(profit);  // sum_i p_i pi_i
  if (normalizer <= 0.0)
    throw ValidationError("sum p_i pi_i must be positive");
  double scale = 1.0 / normalizer;  // M
  Vector mu = p.cwiseProduct(profit) * scale;

  // placeholder guess-the-state utility matrix; the cost actually used is
  // the linear functional below
  Matrix utility = Matrix::Identity(n, n);
  DecisionProblem problem = DecisionProblem::validated(std::move(utility));
  SingleTypeInstance inst = SingleTypeInstance::validated(
      std::move(problem), Belief::simplex(std::move(mu)),
      Belief::full_support(p), value);

  return {std::move(inst), scale};
}

}  // namespace optad
