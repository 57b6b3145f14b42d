#include "optad/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace optad::io {

namespace {

[[noreturn]] void fail(const std::string& context, const std::string& what) {
  throw ValidationError(context + ": " + what);
}

double get_number(const Json& j, const std::string& context) {
  if (!j.is_number()) fail(context, "expected a number");
  return j.get<double>();
}

Vector get_vector(const Json& j, const std::string& context) {
  if (!j.is_array()) fail(context, "expected an array of numbers");
  Vector v(j.size());
  for (size_t i = 0; i < j.size(); ++i)
    v[static_cast<long>(i)] =
        get_number(j[i], context + "[" + std::to_string(i) + "]");
  return v;
}

// accepts nested rows or a flat row-major (state-major) list
Matrix get_matrix(const Json& j, long rows, long cols,
                  const std::string& context) {
  Matrix m(rows, cols);
  if (!j.is_array()) fail(context, "expected an array");
  if (!j.empty() && j[0].is_array()) {
    if (static_cast<long>(j.size()) != rows)
      fail(context, "expected " + std::to_string(rows) + " rows");
    for (long r = 0; r < rows; ++r) {
      Vector row = get_vector(j[r], context + "[" + std::to_string(r) + "]");
      if (row.size() != cols)
        fail(context + "[" + std::to_string(r) + "]",
             "expected " + std::to_string(cols) + " entries");
      m.row(r) = row;
    }
    return m;
  }
  if (static_cast<long>(j.size()) != rows * cols)
    fail(context, "expected " + std::to_string(rows * cols) +
                      " entries (row-major, state-major)");
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < cols; ++c)
      m(r, c) = get_number(j[r * cols + c],
                           context + "[" + std::to_string(r * cols + c) + "]");
  return m;
}

const Json& require_field(const Json& doc, const std::string& name) {
  auto it = doc.find(name);
  if (it == doc.end()) fail("field '" + name + "'", "missing");
  return *it;
}

int get_int(const Json& j, const std::string& context) {
  if (!j.is_number_integer() || j.get<long>() < 1)
    fail(context, "expected a positive integer");
  return j.get<int>();
}

}  // namespace

InstanceFile parse_instance(const Json& doc) {
  if (!doc.is_object()) fail("instance", "expected a JSON object");
  InstanceFile out;
  out.kind = require_field(doc, "kind").get<std::string>();

  if (out.kind == "disclosure") {
    const Json& pr = require_field(doc, "prospects");
    Vector p = get_vector(require_field(pr, "p"), "prospects.p");
    Vector profit = get_vector(require_field(pr, "profit"), "prospects.profit");
    Vector value = get_vector(require_field(pr, "value"), "prospects.value");
    if (p.size() != profit.size() || p.size() != value.size())
      fail("prospects", "p, profit and value must have equal lengths");
    for (long i = 0; i < p.size(); ++i)
      out.prospects.push_back({p[i], profit[i], value[i]});
    return out;
  }

  int n_states = get_int(require_field(doc, "n_states"), "n_states");
  int n_actions = get_int(require_field(doc, "n_actions"), "n_actions");
  Matrix utility =
      get_matrix(require_field(doc, "utility"), n_states, n_actions, "utility");
  DecisionProblem problem = DecisionProblem::validated(std::move(utility));

  if (out.kind == "single") {
    Belief mu = Belief::simplex(get_vector(require_field(doc, "mu"), "mu"));
    Belief theta =
        Belief::full_support(get_vector(require_field(doc, "theta"), "theta"));
    std::optional<Vector> linear_cost;
    if (doc.contains("linear_cost"))
      linear_cost = get_vector(doc["linear_cost"], "linear_cost");
    out.single = SingleTypeInstance::validated(
        std::move(problem), std::move(mu), std::move(theta),
        std::move(linear_cost));
    if (doc.contains("disclosure_scale"))
      out.disclosure_scale =
          get_number(doc["disclosure_scale"], "disclosure_scale");
    return out;
  }

  if (out.kind == "multi") {
    const Json& types_doc = require_field(doc, "types");
    if (!types_doc.is_array() || types_doc.empty())
      fail("types", "expected a non-empty array of beliefs");
    std::vector<Belief> types;
    for (size_t t = 0; t < types_doc.size(); ++t)
      types.push_back(Belief::full_support(
          get_vector(types_doc[t], "types[" + std::to_string(t) + "]")));
    Matrix joint = get_matrix(require_field(doc, "joint"), n_states,
                              static_cast<long>(types.size()), "joint");
    out.multi = MultiTypeInstance::validated(std::move(problem),
                                             std::move(types), std::move(joint));
    return out;
  }

  fail("kind", "must be one of 'single', 'multi', 'disclosure'");
}

InstanceFile load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open instance file: " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
  try {
    return parse_instance(doc);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

Json single_instance_to_json(const SingleTypeInstance& instance,
                             std::optional<double> disclosure_scale) {
  Json doc;
  doc["kind"] = "single";
  doc["n_states"] = instance.problem.n_states;
  doc["n_actions"] = instance.problem.n_actions;
  Json rows = Json::array();
  for (int w = 0; w < instance.problem.n_states; ++w)
    rows.push_back(number_array(instance.problem.utility.row(w).transpose()));
  doc["utility"] = std::move(rows);
  doc["mu"] = number_array(instance.mu.probs);
  doc["theta"] = number_array(instance.theta.probs);
  if (instance.linear_cost) doc["linear_cost"] = number_array(*instance.linear_cost);
  if (disclosure_scale) doc["disclosure_scale"] = rounded(*disclosure_scale);
  return doc;
}

AdvertisingRule rule_from_json(const Json& doc) {
  if (!doc.is_object()) fail("rule", "expected a JSON object");
  const Json& sig = require_field(doc, "signals");
  if (!sig.is_array() || sig.empty())
    fail("signals", "expected a non-empty array");
  std::vector<SignalEntry> entries;
  for (size_t s = 0; s < sig.size(); ++s) {
    const std::string ctx = "signals[" + std::to_string(s) + "]";
    if (!sig[s].is_object()) fail(ctx, "expected an object");
    SignalEntry e;
    e.pi_given_omega =
        get_vector(require_field(sig[s], "pi_given_omega"), ctx + ".pi_given_omega");
    e.price = get_number(require_field(sig[s], "price"), ctx + ".price");
    entries.push_back(std::move(e));
  }
  return AdvertisingRule::validated(std::move(entries));
}

AdvertisingRule load_rule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open rule file: " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
  try {
    return rule_from_json(doc);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

Json rule_to_json(const AdvertisingRule& rule) {
  Json doc;
  Json signals = Json::array();
  for (const SignalEntry& s : rule.signals) {
    Json e;
    e["pi_given_omega"] = number_array(s.pi_given_omega);
    e["price"] = rounded(s.price);
    signals.push_back(std::move(e));
  }
  doc["signals"] = std::move(signals);
  return doc;
}

Json decomposition_to_json(const PosteriorDecomposition& decomp) {
  Json parts = Json::array();
  for (const DecompositionPart& p : decomp.parts) {
    Json e;
    e["phi"] = rounded(p.phi);
    e["eta"] = number_array(p.eta.probs);
    parts.push_back(std::move(e));
  }
  Json doc;
  doc["parts"] = std::move(parts);
  return doc;
}

double rounded(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

Json number_array(const Vector& v) {
  Json arr = Json::array();
  for (long i = 0; i < v.size(); ++i) arr.push_back(rounded(v[i]));
  return arr;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write to " + path);
  out << text;
}

}  // namespace optad::io
