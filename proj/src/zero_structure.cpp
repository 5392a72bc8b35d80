#include "dhj/zero_structure.hpp"

#include <algorithm>
#include <string>

namespace dhj {

ZeroStructure zero_structure(const Graph& g, const Quasimetric& q, double tol) {
  const std::size_t n = g.vertex_count();
  ZeroStructure zs;
  zs.zero_edge.resize(n);
  zs.zero_successor.resize(n);
  for (VertexId v = 0; v < n; ++v) {
    std::size_t count = 0;
    for (const EdgeId id : g.out_edges(v)) {
      if (is_zero(g.edge(id).delta, tol)) {
        zs.zero_edge[v] = id;
        zs.zero_successor[v] = g.edge(id).to;
        ++count;
      }
    }
    if (count != 1)
      throw Error(ErrorCode::assumption_violated,
                  "vertex '" + g.name(v) + "' has " + std::to_string(count) +
                      " zero-delta out-edges (exactly one required)",
                  {{"vertex", g.name(v)}, {"zero_out_degree", count}});
  }

  // Walk from every vertex until a repetition; the walk closes on a cycle.
  zs.cycle_of.assign(n, std::nullopt);
  std::vector<std::vector<VertexId>> found;
  std::vector<int> state(n, 0);  // 0 new, 1 on current walk, 2 done
  for (VertexId start = 0; start < n; ++start) {
    if (state[start] != 0) continue;
    std::vector<VertexId> walk;
    VertexId v = start;
    while (state[v] == 0) {
      state[v] = 1;
      walk.push_back(v);
      v = zs.zero_successor[v];
    }
    if (state[v] == 1) {
      std::vector<VertexId> cycle(std::find(walk.begin(), walk.end(), v), walk.end());
      std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
      found.push_back(std::move(cycle));
    }
    for (const VertexId w : walk) state[w] = 2;
  }
  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  zs.cycles = std::move(found);
  for (std::size_t i = 0; i < zs.cycles.size(); ++i) {
    for (const VertexId v : zs.cycles[i]) zs.cycle_of[v] = i;
  }

  zs.basin_of.resize(n);
  for (VertexId v = 0; v < n; ++v) {
    VertexId w = v;
    while (!zs.cycle_of[w]) w = zs.zero_successor[w];
    zs.basin_of[v] = *zs.cycle_of[w];
  }

  zs.exiting_basin_of.assign(n, 0);
  std::vector<double> best(n, kInfinity);
  for (std::size_t i = 0; i < zs.cycles.size(); ++i) {
    const auto d = distance_from_cycle(q, zs, i);
    for (VertexId v = 0; v < n; ++v) {
      if (d[v] < best[v]) {
        best[v] = d[v];
        zs.exiting_basin_of[v] = i;
      }
    }
  }
  return zs;
}

std::vector<double> distance_from_cycle(const Quasimetric& q, const ZeroStructure& zs, std::size_t i) {
  if (i >= zs.cycles.size())
    throw Error(ErrorCode::invalid_cycle_index, "cycle index " + std::to_string(i) + " out of range",
                {{"cycle", i}, {"cycle_count", zs.cycles.size()}});
  std::vector<double> d(q.size(), kInfinity);
  for (VertexId x = 0; x < q.size(); ++x) {
    for (const VertexId c : zs.cycles[i]) d[x] = std::min(d[x], q.dist(c, x));
  }
  return d;
}

double cycle_distance(const Quasimetric& q, const ZeroStructure& zs, std::size_t from, std::size_t to) {
  if (from >= zs.cycles.size() || to >= zs.cycles.size())
    throw Error(ErrorCode::invalid_cycle_index, "cycle index out of range");
  return set_distance(q, zs.cycles[from], zs.cycles[to]).value;
}

Potential component_potential(const Graph& g, const ZeroStructure& zs, std::size_t cycle_index,
                              const std::vector<std::optional<EdgeId>>& entering_edge) {
  const std::size_t n = g.vertex_count();
  Potential omega(n, 0.0);
  // 0 = unknown, 1 = in progress, 2 = fixed
  std::vector<int> state(n, 0);
  for (const VertexId c : zs.cycles.at(cycle_index)) state[c] = 2;
  for (VertexId start = 0; start < n; ++start) {
    if (state[start] == 2 || !entering_edge[start]) continue;
    std::vector<VertexId> chain;
    VertexId v = start;
    while (state[v] == 0 && entering_edge[v]) {
      state[v] = 1;
      chain.push_back(v);
      v = g.edge(*entering_edge[v]).from;
    }
    if (state[v] != 2) {
      // Chain does not reach the cycle: these vertices are not in the component.
      for (const VertexId w : chain) state[w] = 2;
      continue;
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      const Edge& e = g.edge(*entering_edge[*it]);
      omega[*it] = omega[e.from] + e.delta;
      state[*it] = 2;
    }
  }
  return omega;
}

OutUnicyclicComponent geodetic_out_component(const Graph& g, const Quasimetric& q,
                                             const ZeroStructure& zs, std::size_t cycle_index) {
  (void)q;
  if (cycle_index >= zs.cycles.size())
    throw Error(ErrorCode::invalid_cycle_index,
                "cycle index " + std::to_string(cycle_index) + " out of range",
                {{"cycle", cycle_index}, {"cycle_count", zs.cycles.size()}});
  const auto& cycle = zs.cycles[cycle_index];
  const ShortestPathTree tree = shortest_path_tree(g, cycle);

  OutUnicyclicComponent comp;
  comp.cycle_index = cycle_index;
  comp.entering_edge.assign(g.vertex_count(), std::nullopt);
  for (std::size_t k = 0; k < cycle.size(); ++k) {
    const VertexId from = cycle[k];
    const VertexId to = cycle[(k + 1) % cycle.size()];
    comp.entering_edge[to] = zs.zero_edge[from];
    comp.edges.push_back(zs.zero_edge[from]);
  }
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (zs.cycle_of[v] == cycle_index) continue;
    if (!tree.parent_edge[v])
      throw Error(ErrorCode::not_strongly_connected,
                  "vertex '" + g.name(v) + "' is unreachable from the cycle");
    comp.entering_edge[v] = tree.parent_edge[v];
    comp.edges.push_back(*tree.parent_edge[v]);
  }
  comp.omega = component_potential(g, zs, cycle_index, comp.entering_edge);
  return comp;
}

nlohmann::json to_json(const Graph& g, const ZeroStructure& zs) {
  nlohmann::json cycles = nlohmann::json::array();
  for (const auto& c : zs.cycles) {
    nlohmann::json names = nlohmann::json::array();
    for (const VertexId v : c) names.push_back(g.name(v));
    cycles.push_back(std::move(names));
  }
  nlohmann::json basin = nlohmann::json::object(), exiting = nlohmann::json::object();
  nlohmann::json zero_edges = nlohmann::json::array();
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    basin[g.name(v)] = zs.basin_of[v];
    exiting[g.name(v)] = zs.exiting_basin_of[v];
    zero_edges.push_back({{"from", g.name(v)}, {"to", g.name(zs.zero_successor[v])}});
  }
  return {{"cycles", std::move(cycles)},
          {"basin_of", std::move(basin)},
          {"exiting_basin_of", std::move(exiting)},
          {"zero_edges", std::move(zero_edges)}};
}

}  // namespace dhj
