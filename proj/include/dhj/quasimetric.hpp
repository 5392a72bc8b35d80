#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "dhj/graph.hpp"

namespace dhj {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Shortest-path tree grown from a set of sources (label-setting, nonnegative
/// weights). Among equal-cost predecessors the one earliest in vertex order
/// wins.
struct ShortestPathTree {
  std::vector<double> dist;
  /// Edge entering each vertex on its chosen geodesic; empty for sources and
  /// unreachable vertices.
  std::vector<std::optional<EdgeId>> parent_edge;
};

ShortestPathTree shortest_path_tree(const Graph& g, std::span<const VertexId> sources);

/// The pseudo-quasimetric d(x, y) = min over directed paths of the summed
/// deltas, with one geodesic tree per source.
class Quasimetric {
 public:
  Quasimetric(std::size_t n, std::vector<double> dist, std::vector<std::optional<VertexId>> pred)
      : n_(n), dist_(std::move(dist)), pred_(std::move(pred)) {}

  std::size_t size() const noexcept { return n_; }
  double dist(VertexId from, VertexId to) const { return dist_[from * n_ + to]; }
  /// Vertex preceding `to` on the geodesic from `from`.
  std::optional<VertexId> pred(VertexId from, VertexId to) const { return pred_[from * n_ + to]; }
  /// Geodesic as a vertex sequence from `from` to `to` (just {from} if equal).
  std::vector<VertexId> path(VertexId from, VertexId to) const;

 private:
  std::size_t n_;
  std::vector<double> dist_;
  std::vector<std::optional<VertexId>> pred_;
};

/// Throws not-strongly-connected.
Quasimetric all_pairs_distances(const Graph& g);

struct SetDistance {
  double value = 0.0;
  std::vector<VertexId> geodesic;
};

/// min over x in from, y in to of d(x, y); ties go to the geodesic with the
/// fewest edges, then to the lexicographically smallest (x, y). Throws empty-set.
SetDistance set_distance(const Quasimetric& q, std::span<const VertexId> from,
                         std::span<const VertexId> to);

nlohmann::json to_json(const Graph& g, const Quasimetric& q);

}  // namespace dhj
