#pragma once

#include "optad/model.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

namespace optad::io {

// insertion-ordered so identical inputs serialize byte-identically
using Json = nlohmann::ordered_json;

// On-disk instance document, discriminated by "kind":
//   single:     n_states, n_actions, utility, mu, theta [, linear_cost]
//   multi:      n_states, n_actions, utility, types, joint
//   disclosure: prospects {p, profit, value}
struct InstanceFile {
  std::string kind;
  std::optional<SingleTypeInstance> single;
  std::optional<MultiTypeInstance> multi;
  std::vector<Prospect> prospects;
  std::optional<double> disclosure_scale;  // carried on converted instances
};

InstanceFile parse_instance(const Json& doc);
InstanceFile load_instance(const std::string& path);

Json single_instance_to_json(const SingleTypeInstance& instance,
                             std::optional<double> disclosure_scale = {});

AdvertisingRule rule_from_json(const Json& doc);
AdvertisingRule load_rule(const std::string& path);
Json rule_to_json(const AdvertisingRule& rule);

Json decomposition_to_json(const PosteriorDecomposition& decomp);

// report floats are fixed at 12 significant digits
double rounded(double x);
Json number_array(const Vector& v);

void write_text(const std::string& path, const std::string& text);

}  // namespace optad::io
