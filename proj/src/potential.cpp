#include "dhj/potential.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dhj {

double min_value(const Potential& w) {
  return *std::min_element(w.values.begin(), w.values.end());
}

double max_value(const Potential& w) {
  return *std::max_element(w.values.begin(), w.values.end());
}

Potential normalized(const Potential& w) {
  if (w.values.empty()) return w;
  const double shift = min_value(w);
  Potential out = w;
  for (double& v : out.values) v -= shift;
  return out;
}

Potential pointwise_min(const Potential& a, const Potential& b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::invalid_argument, "potentials have different sizes");
  Potential out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::min(a[i], b[i]);
  return out;
}

double max_norm_distance(const Potential& a, const Potential& b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::invalid_argument, "potentials have different sizes");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

Potential potential_from_json(const Graph& g, const nlohmann::json& j) {
  if (!j.is_object())
    throw Error(ErrorCode::malformed_json, "potential must be a JSON object");
  Potential w(g.vertex_count(), 0.0);
  std::vector<bool> seen(g.vertex_count(), false);
  for (const auto& [key, value] : j.items()) {
    const auto v = g.find(key);
    if (!v)
      throw Error(ErrorCode::unknown_vertex, "potential names unknown vertex '" + key + "'",
                  {{"vertex", key}});
    if (!value.is_number())
      throw Error(ErrorCode::malformed_json, "potential value for '" + key + "' is not a number",
                  {{"vertex", key}});
    w[*v] = value.get<double>();
    seen[*v] = true;
  }
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (!seen[v])
      throw Error(ErrorCode::missing_vertex, "potential has no value for vertex '" + g.name(v) + "'",
                  {{"vertex", g.name(v)}});
  }
  return w;
}

nlohmann::json to_json(const Graph& g, const Potential& w) {
  nlohmann::json j = nlohmann::json::object();
  for (VertexId v = 0; v < g.vertex_count(); ++v) j[g.name(v)] = w[v];
  return j;
}

}  // namespace dhj
