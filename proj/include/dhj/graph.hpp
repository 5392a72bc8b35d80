#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dhj/error.hpp"

namespace dhj {

using VertexId = std::size_t;
using EdgeId = std::size_t;

/// Directed edge with exponential cost `delta` and subexponential rate
/// prefactor, so that r_N(from, to) = prefactor * exp(-N * delta).
struct Edge {
  VertexId from = 0;
  VertexId to = 0;
  double delta = 0.0;
  double prefactor = 1.0;
};

/// Immutable weighted digraph. Edges are kept sorted by (from, to) vertex
/// index, which is the canonical edge order used for tie-breaking; vertex
/// order is the order the vertices were given in.
class Graph {
 public:
  /// Throws Error on self-loops, duplicate edges, negative deltas,
  /// nonpositive prefactors, duplicate names or out-of-range endpoints.
  Graph(std::vector<std::string> vertex_names, std::vector<Edge> edges);

  std::size_t vertex_count() const noexcept { return names_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(VertexId v) const { return names_.at(v); }

  std::optional<VertexId> find(std::string_view name) const;
  /// Like find() but throws unknown-vertex.
  VertexId index_of(std::string_view name) const;

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }

  std::span<const EdgeId> out_edges(VertexId v) const { return out_[v]; }
  std::span<const EdgeId> in_edges(VertexId v) const { return in_[v]; }

  std::optional<EdgeId> find_edge(VertexId from, VertexId to) const;

 private:
  std::vector<std::string> names_;
  std::map<std::string, VertexId, std::less<>> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
};

Graph graph_from_json(const nlohmann::json& j);
Graph parse_graph(std::istream& in);
Graph parse_graph(std::string_view text);
nlohmann::json to_json(const Graph& g);

/// Components in discovery order of Tarjan's algorithm; each component lists
/// its vertices in ascending index order.
std::vector<std::vector<VertexId>> strongly_connected_components(const Graph& g);
bool is_strongly_connected(const Graph& g);

struct ValidationReport {
  bool strongly_connected = false;
  bool has_self_loop = false;
  /// Per vertex: number of out-edges with |delta| <= tol.
  std::vector<std::size_t> zero_out_degree;
  bool assumption_2_3_holds = false;
  std::vector<std::string> violations;

  bool ok() const noexcept { return strongly_connected && !has_self_loop && assumption_2_3_holds; }
};

ValidationReport validate(const Graph& g, double tol = kDefaultTolerance);
nlohmann::json to_json(const Graph& g, const ValidationReport& report);

/// Throws not-strongly-connected / assumption-violated with the first
/// diagnostic of the report.
void require_valid(const Graph& g, double tol = kDefaultTolerance);

inline bool is_zero(double value, double tol) noexcept {
  return value <= tol && value >= -tol;
}

}  // namespace dhj
