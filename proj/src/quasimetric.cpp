#include "dhj/quasimetric.hpp"

#include <algorithm>
#include <queue>
#include <tuple>

namespace dhj {

ShortestPathTree shortest_path_tree(const Graph& g, std::span<const VertexId> sources) {
  const std::size_t n = g.vertex_count();
  ShortestPathTree t{std::vector<double>(n, kInfinity), std::vector<std::optional<EdgeId>>(n)};
  std::vector<bool> settled(n, false);
  using Item = std::tuple<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (const VertexId s : sources) {
    t.dist[s] = 0.0;
    heap.emplace(0.0, s);
  }
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (settled[u] || d > t.dist[u]) continue;
    settled[u] = true;
    for (const EdgeId id : g.out_edges(u)) {
      const Edge& e = g.edge(id);
      if (settled[e.to]) continue;
      const double candidate = d + e.delta;
      const bool better = candidate < t.dist[e.to];
      const bool tie_earlier = candidate == t.dist[e.to] && t.parent_edge[e.to] &&
                               u < g.edge(*t.parent_edge[e.to]).from;
      if (better || tie_earlier) {
        t.dist[e.to] = candidate;
        t.parent_edge[e.to] = id;
        if (better) heap.emplace(candidate, e.to);
      }
    }
  }
  return t;
}

std::vector<VertexId> Quasimetric::path(VertexId from, VertexId to) const {
  std::vector<VertexId> out{to};
  VertexId cur = to;
  while (cur != from) {
    const auto p = pred(from, cur);
    if (!p) return {};
    cur = *p;
    out.push_back(cur);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

Quasimetric all_pairs_distances(const Graph& g) {
  if (!is_strongly_connected(g))
    throw Error(ErrorCode::not_strongly_connected, "distances require a strongly connected graph");
  const std::size_t n = g.vertex_count();
  std::vector<double> dist(n * n);
  std::vector<std::optional<VertexId>> pred(n * n);
  for (VertexId s = 0; s < n; ++s) {
    const VertexId src[] = {s};
    const ShortestPathTree t = shortest_path_tree(g, src);
    for (VertexId v = 0; v < n; ++v) {
      dist[s * n + v] = t.dist[v];
      if (t.parent_edge[v]) pred[s * n + v] = g.edge(*t.parent_edge[v]).from;
    }
  }
  return Quasimetric(n, std::move(dist), std::move(pred));
}

SetDistance set_distance(const Quasimetric& q, std::span<const VertexId> from,
                         std::span<const VertexId> to) {
  if (from.empty() || to.empty())
    throw Error(ErrorCode::empty_set, "set distance needs two nonempty vertex sets");
  std::vector<VertexId> xs(from.begin(), from.end()), ys(to.begin(), to.end());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  double best = kInfinity;
  std::size_t best_hops = 0;
  VertexId bx = xs.front(), by = ys.front();
  for (const VertexId x : xs) {
    for (const VertexId y : ys) {
      const double d = q.dist(x, y);
      if (d > best) continue;
      const std::size_t hops = q.path(x, y).size();
      if (d < best || hops < best_hops) {
        best = d;
        best_hops = hops;
        bx = x;
        by = y;
      }
    }
  }
  return {best, q.path(bx, by)};
}

nlohmann::json to_json(const Graph& g, const Quasimetric& q) {
  nlohmann::json dist = nlohmann::json::object();
  for (VertexId x = 0; x < q.size(); ++x) {
    nlohmann::json row = nlohmann::json::object();
    for (VertexId y = 0; y < q.size(); ++y) row[g.name(y)] = q.dist(x, y);
    dist[g.name(x)] = std::move(row);
  }
  return dist;
}

}  // namespace dhj
