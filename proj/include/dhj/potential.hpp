#pragma once

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "dhj/graph.hpp"

namespace dhj {

/// A real function on the vertex set, indexed by VertexId. Holds W, W_N, FW,
/// the quasipotentials W_C and the component potentials omega.
struct Potential {
  std::vector<double> values;

  Potential() = default;
  explicit Potential(std::vector<double> v) : values(std::move(v)) {}
  Potential(std::size_t n, double fill) : values(n, fill) {}

  std::size_t size() const noexcept { return values.size(); }
  double operator[](VertexId v) const { return values[v]; }
  double& operator[](VertexId v) { return values[v]; }

  friend bool operator==(const Potential&, const Potential&) = default;
};

double min_value(const Potential& w);
double max_value(const Potential& w);

/// Shift so that the minimum is exactly 0.
Potential normalized(const Potential& w);

Potential pointwise_min(const Potential& a, const Potential& b);

/// max_x |a(x) - b(x)|
double max_norm_distance(const Potential& a, const Potential& b);

/// Object schema {"<vertex>": <real>}. Missing vertices are rejected
/// (missing-vertex), unknown names are rejected (unknown-vertex).
Potential potential_from_json(const Graph& g, const nlohmann::json& j);
nlohmann::json to_json(const Graph& g, const Potential& w);

}  // namespace dhj
