#include "dhj/arborescence.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>

namespace dhj {

namespace {

void check_cap(const Graph& g, std::size_t cap, const char* what) {
  if (g.vertex_count() > cap)
    throw Error(ErrorCode::size_cap_exceeded,
                std::string(what) + ": graph has " + std::to_string(g.vertex_count()) +
                    " vertices, cap is " + std::to_string(cap),
                {{"vertices", g.vertex_count()}, {"cap", cap}});
}

// Edge of the working graph handed to the contraction step; `origin` indexes
// the caller's edge list.
struct WorkEdge {
  std::size_t u;
  std::size_t v;
  double w;
  std::size_t origin;
};

// Minimum out-arborescence (every non-root vertex gets one entering edge).
// Returns indices into `edges`. Ties go to the lowest index.
std::vector<std::size_t> min_out_arborescence(std::size_t n, std::size_t root,
                                              const std::vector<WorkEdge>& edges) {
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> best(n, none);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const WorkEdge& e = edges[i];
    if (e.v == root || e.u == e.v) continue;
    if (best[e.v] == none || e.w < edges[best[e.v]].w) best[e.v] = i;
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (v != root && best[v] == none)
      throw Error(ErrorCode::not_strongly_connected, "some vertex cannot reach the root");
  }

  // Cycles of the chosen-parent graph.
  std::vector<std::size_t> cycle_id(n, none), mark(n, none);
  std::size_t cycles = 0;
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t v = s;
    while (v != root && mark[v] == none && cycle_id[v] == none) {
      mark[v] = s;
      v = edges[best[v]].u;
    }
    if (v != root && mark[v] == s && cycle_id[v] == none) {
      std::size_t w = v;
      do {
        cycle_id[w] = cycles;
        w = edges[best[w]].u;
      } while (w != v);
      ++cycles;
    }
  }
  if (cycles == 0) {
    std::vector<std::size_t> chosen;
    for (std::size_t v = 0; v < n; ++v) {
      if (v != root) chosen.push_back(best[v]);
    }
    return chosen;
  }

  // Contract every cycle to one super-vertex.
  std::vector<std::size_t> comp(n);
  std::size_t next = cycles;
  for (std::size_t v = 0; v < n; ++v) comp[v] = cycle_id[v] != none ? cycle_id[v] : next++;
  std::vector<WorkEdge> contracted;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const WorkEdge& e = edges[i];
    const std::size_t cu = comp[e.u], cv = comp[e.v];
    if (cu == cv) continue;
    const double reduced = cycle_id[e.v] != none ? e.w - edges[best[e.v]].w : e.w;
    contracted.push_back({cu, cv, reduced, i});
  }
  const auto sub = min_out_arborescence(next, comp[root], contracted);

  std::vector<std::size_t> chosen;
  std::vector<std::size_t> entry_of_cycle(cycles, none);
  for (const std::size_t k : sub) {
    const std::size_t i = contracted[k].origin;
    chosen.push_back(i);
    if (cycle_id[edges[i].v] != none) entry_of_cycle[cycle_id[edges[i].v]] = edges[i].v;
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (cycle_id[v] != none && entry_of_cycle[cycle_id[v]] != v) chosen.push_back(best[v]);
  }
  return chosen;
}

}  // namespace

double Arborescence::log_weight(const Graph& g, double N) const {
  double total = 0.0;
  for (const EdgeId id : edges) {
    const Edge& e = g.edge(id);
    total += std::log(e.prefactor) - N * e.delta;
  }
  return total;
}

Arborescence make_arborescence(const Graph& g, VertexId root, std::vector<EdgeId> edges) {
  std::sort(edges.begin(), edges.end());
  double sum = 0.0;
  for (const EdgeId id : edges) sum += g.edge(id).delta;
  return {root, std::move(edges), sum};
}

bool is_arborescence(const Graph& g, VertexId root, const std::vector<EdgeId>& edges) {
  const std::size_t n = g.vertex_count();
  if (root >= n || edges.size() + 1 != n) return false;
  std::vector<std::optional<VertexId>> succ(n);
  for (const EdgeId id : edges) {
    if (id >= g.edge_count()) return false;
    const Edge& e = g.edge(id);
    if (e.from == root || succ[e.from]) return false;
    succ[e.from] = e.to;
  }
  for (VertexId v = 0; v < n; ++v) {
    VertexId w = v;
    for (std::size_t steps = 0; w != root; ++steps) {
      if (steps >= n || !succ[w]) return false;
      w = *succ[w];
    }
  }
  return true;
}

std::vector<Arborescence> enumerate_arborescences(const Graph& g, VertexId root, std::size_t cap) {
  check_cap(g, cap, "arborescence enumeration");
  const std::size_t n = g.vertex_count();
  std::vector<VertexId> order;
  for (VertexId v = 0; v < n; ++v) {
    if (v != root) order.push_back(v);
  }
  std::vector<std::optional<VertexId>> succ(n);
  std::vector<EdgeId> chosen;
  std::vector<Arborescence> out;

  // Choosing (v, w) closes a cycle iff following successors from w returns to v.
  auto closes_cycle = [&](VertexId v, VertexId w) {
    VertexId x = w;
    while (x != root && succ[x]) {
      if (x == v) return true;
      x = *succ[x];
    }
    return x == v;
  };

  auto recurse = [&](auto&& self, std::size_t k) -> void {
    if (k == order.size()) {
      out.push_back(make_arborescence(g, root, chosen));
      return;
    }
    const VertexId v = order[k];
    for (const EdgeId id : g.out_edges(v)) {
      const VertexId w = g.edge(id).to;
      if (closes_cycle(v, w)) continue;
      succ[v] = w;
      chosen.push_back(id);
      self(self, k + 1);
      chosen.pop_back();
      succ[v].reset();
    }
  };
  recurse(recurse, 0);
  return out;
}

Arborescence min_arborescence(const Graph& g, VertexId root) {
  if (!is_strongly_connected(g))
    throw Error(ErrorCode::not_strongly_connected, "arborescences require a strongly connected graph");
  if (root >= g.vertex_count()) throw Error(ErrorCode::unknown_vertex, "root out of range");
  // An arborescence toward root in g is an out-arborescence from root in the
  // reversed graph: reverse each edge (x, y) into (y, x).
  std::vector<WorkEdge> reversed;
  reversed.reserve(g.edge_count());
  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    const Edge& e = g.edge(id);
    reversed.push_back({e.to, e.from, e.delta, id});
  }
  const auto chosen = min_out_arborescence(g.vertex_count(), root, reversed);
  std::vector<EdgeId> edges;
  edges.reserve(chosen.size());
  for (const std::size_t i : chosen) edges.push_back(reversed[i].origin);
  return make_arborescence(g, root, std::move(edges));
}

Potential fw_solution(const Graph& g) {
  Potential w(g.vertex_count(), 0.0);
  for (VertexId x = 0; x < g.vertex_count(); ++x) w[x] = min_arborescence(g, x).weight_sum;
  return normalized(w);
}

double log_sum_exp(const std::vector<double>& terms) {
  if (terms.empty()) return -std::numeric_limits<double>::infinity();
  const double top = *std::max_element(terms.begin(), terms.end());
  if (std::isinf(top)) return top;
  double sum = 0.0;
  for (const double t : terms) sum += std::exp(t - top);
  return top + std::log(sum);
}

std::vector<double> log_matrix_tree_measure(const Graph& g, double N, std::size_t cap) {
  check_cap(g, cap, "Matrix Tree measure");
  if (!(N > 0.0)) throw Error(ErrorCode::invalid_argument, "N must be positive");
  if (!is_strongly_connected(g))
    throw Error(ErrorCode::not_strongly_connected, "invariant measure requires a strongly connected graph");
  std::vector<double> per_root(g.vertex_count());
  for (VertexId x = 0; x < g.vertex_count(); ++x) {
    std::vector<double> terms;
    for (const auto& a : enumerate_arborescences(g, x, cap)) terms.push_back(a.log_weight(g, N));
    per_root[x] = log_sum_exp(terms);
  }
  const double z = log_sum_exp(per_root);
  for (double& v : per_root) v -= z;
  return per_root;
}

std::vector<double> matrix_tree_measure(const Graph& g, double N, std::size_t cap) {
  auto logs = log_matrix_tree_measure(g, N, cap);
  for (double& v : logs) v = std::exp(v);
  return logs;
}

LiftedChain build_lifted_chain(const Graph& g, double N, std::size_t cap) {
  check_cap(g, cap, "lifted chain");
  if (!(N > 0.0)) throw Error(ErrorCode::invalid_argument, "N must be positive");
  if (!is_strongly_connected(g))
    throw Error(ErrorCode::not_strongly_connected, "lifted chain requires a strongly connected graph");
  const std::size_t n = g.vertex_count();

  LiftedChain chain;
  std::map<std::vector<EdgeId>, std::size_t> index;
  std::vector<std::size_t> first_of_root(n + 1, 0);
  for (VertexId x = 0; x < n; ++x) {
    first_of_root[x] = chain.nodes.size();
    for (auto& a : enumerate_arborescences(g, x, cap)) {
      index.emplace(a.edges, chain.nodes.size());
      chain.nodes.push_back(std::move(a));
    }
  }
  first_of_root[n] = chain.nodes.size();

  std::vector<double> rate(g.edge_count());
  for (EdgeId id = 0; id < g.edge_count(); ++id)
    rate[id] = g.edge(id).prefactor * std::exp(-N * g.edge(id).delta);

  // tau in T_x, (x, y) in E: tau' = tau + (x, y) - (y, z).
  for (std::size_t k = 0; k < chain.nodes.size(); ++k) {
    const Arborescence& tau = chain.nodes[k];
    const VertexId x = tau.root;
    for (const EdgeId xy : g.out_edges(x)) {
      const VertexId y = g.edge(xy).to;
      std::vector<EdgeId> next;
      next.reserve(tau.edges.size());
      for (const EdgeId id : tau.edges) {
        if (g.edge(id).from != y) next.push_back(id);
      }
      next.push_back(xy);
      std::sort(next.begin(), next.end());
      const auto it = index.find(next);
      if (it == index.end())
        throw Error(ErrorCode::invalid_argument, "lift produced a non-arborescence");
      chain.transitions.push_back({k, it->second, xy, rate[xy]});
    }
  }

  const std::size_t m = chain.nodes.size();
  std::vector<double> logs(m);
  for (std::size_t k = 0; k < m; ++k) logs[k] = chain.nodes[k].log_weight(g, N);
  const double z = log_sum_exp(logs);
  chain.stationary.resize(m);
  for (std::size_t k = 0; k < m; ++k) chain.stationary[k] = std::exp(logs[k] - z);

  chain.in_degree.assign(m, 0);
  chain.out_degree.assign(m, 0);
  std::vector<double> flow(m, 0.0);
  std::vector<std::vector<std::size_t>> fwd(m), bwd(m);
  for (const auto& t : chain.transitions) {
    ++chain.out_degree[t.from];
    ++chain.in_degree[t.to];
    flow[t.to] += chain.stationary[t.from] * t.rate;
    flow[t.from] -= chain.stationary[t.from] * t.rate;
    fwd[t.from].push_back(t.to);
    bwd[t.to].push_back(t.from);
  }
  chain.stationarity_residual = 0.0;
  for (const double f : flow) chain.stationarity_residual = std::max(chain.stationarity_residual, std::abs(f));

  auto reaches_all = [m](const std::vector<std::vector<std::size_t>>& adj) {
    std::vector<bool> seen(m, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (const std::size_t v : adj[u]) {
        if (!seen[v]) {
          seen[v] = true;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == m;
  };
  chain.strongly_connected = m > 0 && reaches_all(fwd) && reaches_all(bwd);

  chain.projected_marginal.assign(n, 0.0);
  for (VertexId x = 0; x < n; ++x) {
    std::vector<double> terms(logs.begin() + first_of_root[x], logs.begin() + first_of_root[x + 1]);
    chain.projected_marginal[x] = std::exp(log_sum_exp(terms) - z);
  }
  return chain;
}

nlohmann::json to_json(const Graph& g, const Arborescence& a) {
  nlohmann::json edges = nlohmann::json::array();
  for (const EdgeId id : a.edges) edges.push_back({g.name(g.edge(id).from), g.name(g.edge(id).to)});
  return {{"root", g.name(a.root)}, {"edges", std::move(edges)}, {"weight", a.weight_sum}};
}

}  // namespace dhj
