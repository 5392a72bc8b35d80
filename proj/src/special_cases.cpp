#include "dhj/special_cases.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "dhj/hj.hpp"
#include "dhj/quasimetric.hpp"
#include "dhj/zero_structure.hpp"

namespace dhj {

namespace {

EdgeId reverse_edge(const Graph& g, EdgeId id) {
  const Edge& e = g.edge(id);
  const auto r = g.find_edge(e.to, e.from);
  if (!r)
    throw Error(ErrorCode::non_reversible_edge_set,
                "edge (" + g.name(e.from) + "," + g.name(e.to) + ") has no reverse",
                {{"from", g.name(e.from)}, {"to", g.name(e.to)}});
  return *r;
}

using Support = std::vector<std::pair<VertexId, VertexId>>;

Support unoriented_support(const Graph& g, const Arborescence& a) {
  Support s;
  for (const EdgeId id : a.edges) {
    const Edge& e = g.edge(id);
    s.emplace_back(std::min(e.from, e.to), std::max(e.from, e.to));
  }
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

ReversibleData gradient_condition(const Graph& g, double tol, VertexId base_vertex) {
  if (base_vertex >= g.vertex_count()) throw Error(ErrorCode::unknown_vertex, "base vertex out of range");
  ReversibleData rd;
  rd.base_vertex = base_vertex;
  rd.delta_field.resize(g.edge_count());
  for (EdgeId id = 0; id < g.edge_count(); ++id)
    rd.delta_field[id] = g.edge(id).delta - g.edge(reverse_edge(g, id)).delta;

  // Potential along a BFS tree; every non-tree edge closes one fundamental cycle.
  const std::size_t n = g.vertex_count();
  std::vector<double> phi(n, 0.0);
  std::vector<bool> seen(n, false);
  std::vector<bool> tree_edge(g.edge_count(), false);
  for (VertexId root = 0; root < n; ++root) {
    const VertexId start = root == 0 ? base_vertex : root;
    if (seen[start]) continue;
    seen[start] = true;
    std::deque<VertexId> queue{start};
    while (!queue.empty()) {
      const VertexId u = queue.front();
      queue.pop_front();
      for (const EdgeId id : g.out_edges(u)) {
        const VertexId v = g.edge(id).to;
        if (seen[v]) continue;
        seen[v] = true;
        phi[v] = phi[u] + rd.delta_field[id];
        tree_edge[id] = tree_edge[reverse_edge(g, id)] = true;
        queue.push_back(v);
      }
    }
  }
  rd.max_cycle_defect = 0.0;
  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    if (tree_edge[id]) continue;
    const Edge& e = g.edge(id);
    rd.max_cycle_defect = std::max(rd.max_cycle_defect, std::abs(phi[e.from] + rd.delta_field[id] - phi[e.to]));
  }
  rd.is_gradient = rd.max_cycle_defect <= tol;
  return rd;
}

Potential reversible_fw(const Graph& g, const ReversibleData& rd) {
  if (!rd.is_gradient)
    throw Error(ErrorCode::gradient_condition_violated,
                "delta field is not a gradient (cycle defect " + std::to_string(rd.max_cycle_defect) + ")",
                {{"max_cycle_defect", rd.max_cycle_defect}});
  const VertexId src[] = {rd.base_vertex};
  const ShortestPathTree tree = shortest_path_tree(g, src);
  const std::size_t n = g.vertex_count();
  Potential fw(n, 0.0);
  std::vector<bool> done(n, false);
  done[rd.base_vertex] = true;
  for (VertexId x = 0; x < n; ++x) {
    std::vector<VertexId> chain;
    VertexId v = x;
    while (!done[v]) {
      if (!tree.parent_edge[v])
        throw Error(ErrorCode::not_strongly_connected, "vertex '" + g.name(v) + "' unreachable from base");
      chain.push_back(v);
      v = g.edge(*tree.parent_edge[v]).from;
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      const EdgeId id = *tree.parent_edge[*it];
      fw[*it] = fw[g.edge(id).from] + rd.delta_field[id];
      done[*it] = true;
    }
  }
  return normalized(fw);
}

std::vector<EdgeId> reverse_path_to_root(const Graph& g, const Arborescence& tau, VertexId y) {
  std::vector<std::optional<EdgeId>> out_edge(g.vertex_count());
  for (const EdgeId id : tau.edges) out_edge[g.edge(id).from] = id;
  std::set<EdgeId> on_path;
  for (VertexId v = y; v != tau.root; v = g.edge(*out_edge[v]).to) on_path.insert(*out_edge[v]);
  std::vector<EdgeId> result;
  for (const EdgeId id : tau.edges)
    result.push_back(on_path.count(id) ? reverse_edge(g, id) : id);
  std::sort(result.begin(), result.end());
  return result;
}

ReversibleStructureReport reversible_structure_checks(const Graph& g, const ReversibleData& rd,
                                                      double tol, std::size_t cap) {
  if (!rd.is_gradient)
    throw Error(ErrorCode::gradient_condition_violated, "structure checks need the gradient condition");
  ReversibleStructureReport report;
  const Quasimetric q = all_pairs_distances(g);
  const ZeroStructure zs = zero_structure(g, q, tol);

  report.cycles_have_length_two =
      std::all_of(zs.cycles.begin(), zs.cycles.end(), [](const auto& c) { return c.size() == 2; });

  const Potential fw = fw_solution(g);
  const SolutionReport sol = check_solution(g, q, zs, fw, tol);
  std::set<EdgeId> reversed_zero;
  for (VertexId v = 0; v < g.vertex_count(); ++v) reversed_zero.insert(reverse_edge(g, zs.zero_edge[v]));
  report.skeleton_is_reversed_zero_map =
      std::set<EdgeId>(sol.skeleton.begin(), sol.skeleton.end()) == reversed_zero;

  const Potential path_fw = reversible_fw(g, rd);
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<Arborescence>> trees(n);
  std::vector<std::map<std::vector<EdgeId>, std::size_t>> lookup(n);
  for (VertexId x = 0; x < n; ++x) {
    trees[x] = enumerate_arborescences(g, x, cap);
    for (std::size_t k = 0; k < trees[x].size(); ++k) lookup[x].emplace(trees[x][k].edges, k);
  }

  report.bijection_holds = true;
  report.weight_identity_holds = true;
  for (VertexId x = 0; x < n; ++x) {
    for (VertexId y = 0; y < n; ++y) {
      if (x == y) continue;
      ++report.pairs_checked;
      if (trees[x].size() != trees[y].size()) report.bijection_holds = false;
      std::vector<bool> hit(trees[y].size(), false);
      const double expected_gap = path_fw[y] - path_fw[x];
      for (const Arborescence& tau : trees[x]) {
        const auto image = reverse_path_to_root(g, tau, y);
        const auto it = lookup[y].find(image);
        if (it == lookup[y].end() || hit[it->second]) {
          report.bijection_holds = false;
          continue;
        }
        hit[it->second] = true;
        ++report.matched_arborescences;
        const double defect = std::abs(trees[y][it->second].weight_sum - tau.weight_sum - expected_gap);
        report.max_weight_defect = std::max(report.max_weight_defect, defect);
        if (defect > tol) report.weight_identity_holds = false;
      }
    }
  }

  std::optional<std::set<Support>> shared;
  report.minimizers_share_support = true;
  for (VertexId z = 0; z < n; ++z) {
    double best = kInfinity;
    for (const auto& a : trees[z]) best = std::min(best, a.weight_sum);
    std::set<Support> supports;
    for (const auto& a : trees[z]) {
      if (a.weight_sum <= best + tol) supports.insert(unoriented_support(g, a));
    }
    if (!shared) shared = std::move(supports);
    else if (*shared != supports) report.minimizers_share_support = false;
  }
  return report;
}

void check_ring(const RingSpec& rs) {
  if (rs.k < 3) throw Error(ErrorCode::invalid_ring, "ring needs at least 3 vertices", {{"k", rs.k}});
  if (rs.forward.size() != rs.k || rs.backward.size() != rs.k)
    throw Error(ErrorCode::invalid_ring, "forward and backward must each have k entries", {{"k", rs.k}});
  for (std::size_t i = 0; i < rs.k; ++i) {
    if (!(rs.forward[i] >= 0.0) || !(rs.backward[i] >= 0.0))
      throw Error(ErrorCode::invalid_ring, "ring deltas must be nonnegative", {{"index", i}});
  }
}

Graph ring_graph(const RingSpec& rs) {
  check_ring(rs);
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= rs.k; ++i) names.push_back(std::to_string(i));
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < rs.k; ++i) {
    const std::size_t next = (i + 1) % rs.k;
    edges.push_back({i, next, rs.forward[i], 1.0});
    edges.push_back({next, i, rs.backward[i], 1.0});
  }
  return Graph(std::move(names), std::move(edges));
}

Potential ring_fw(const RingSpec& rs, double tol) {
  const Graph g = ring_graph(rs);
  const ValidationReport report = validate(g, tol);
  if (!report.assumption_2_3_holds)
    throw Error(ErrorCode::assumption_violated,
                report.violations.empty() ? "ring violates the zero-edge assumption" : report.violations.front(),
                {{"violations", report.violations}});

  const std::size_t k = rs.k;
  // 1-based positions up to 2k; forward delta of position y is forward[(y-1) mod k].
  auto fwd = [&](std::size_t y) { return rs.forward[(y - 1) % k]; };
  auto drift = [&](std::size_t y) { return rs.forward[(y - 1) % k] - rs.backward[(y - 1) % k]; };
  std::vector<double> S(2 * k + 1, 0.0);
  for (std::size_t x = 2; x <= 2 * k; ++x) S[x] = S[x - 1] + drift(x - 1);

  Potential fw(k, 0.0);
  for (std::size_t x = 1; x <= k; ++x) {
    double best = kInfinity;
    for (std::size_t y = x; y < x + k; ++y) best = std::min(best, S[x] - S[y] - fwd(y));
    fw[x - 1] = best;
  }
  return normalized(fw);
}

RingSpec ring_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("k") || !j.contains("forward") || !j.contains("backward") ||
      !j["k"].is_number_unsigned() || !j["forward"].is_array() || !j["backward"].is_array())
    throw Error(ErrorCode::malformed_json, "ring spec must be {\"k\": int, \"forward\": [...], \"backward\": [...]}");
  RingSpec rs;
  rs.k = j["k"].get<std::size_t>();
  for (const auto& v : j["forward"]) {
    if (!v.is_number()) throw Error(ErrorCode::malformed_json, "ring deltas must be numbers");
    rs.forward.push_back(v.get<double>());
  }
  for (const auto& v : j["backward"]) {
    if (!v.is_number()) throw Error(ErrorCode::malformed_json, "ring deltas must be numbers");
    rs.backward.push_back(v.get<double>());
  }
  check_ring(rs);
  return rs;
}

}  // namespace dhj
