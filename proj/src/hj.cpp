#include "dhj/hj.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "dhj/arborescence.hpp"

namespace dhj {

namespace {

void require_total(const Graph& g, const Potential& w) {
  if (w.size() != g.vertex_count())
    throw Error(ErrorCode::missing_vertex,
                "potential has " + std::to_string(w.size()) + " values for " +
                    std::to_string(g.vertex_count()) + " vertices");
}

void require_lambda_size(const ZeroStructure& zs, const Lambda& lambda) {
  if (lambda.size() != zs.cycle_count())
    throw Error(ErrorCode::invalid_argument,
                "lambda has " + std::to_string(lambda.size()) + " entries for " +
                    std::to_string(zs.cycle_count()) + " cycles");
}

// Spanning geodetic out-unicyclic family inside the skeleton, or nothing.
// Vertex x joins component i when it is reachable from C_i through skeleton
// edges along vertices with W - lambda_i = d(C_i, .), avoiding other cycles;
// the smallest such i wins. For 1-Lipschitz W this succeeds iff a family exists.
bool find_geodetic_family(const Graph& g, const Quasimetric& q, const ZeroStructure& zs,
                          const Potential& w, const Lambda& lambda,
                          const std::vector<bool>& in_skeleton, double tol,
                          std::vector<std::size_t>& component,
                          std::vector<std::optional<EdgeId>>& entering) {
  const std::size_t n = g.vertex_count();
  const std::size_t m = zs.cycle_count();
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::vector<std::size_t>> depth(m, std::vector<std::size_t>(n, none));
  std::vector<std::vector<std::optional<EdgeId>>> parent(m, std::vector<std::optional<EdgeId>>(n));

  for (std::size_t i = 0; i < m; ++i) {
    const auto from_cycle = distance_from_cycle(q, zs, i);
    std::deque<VertexId> queue;
    for (const VertexId c : zs.cycles[i]) {
      depth[i][c] = 0;
      queue.push_back(c);
    }
    while (!queue.empty()) {
      const VertexId y = queue.front();
      queue.pop_front();
      for (const EdgeId id : g.out_edges(y)) {
        const VertexId x = g.edge(id).to;
        if (!in_skeleton[id] || depth[i][x] != none || zs.on_cycle(x)) continue;
        if (std::abs(w[x] - lambda[i] - from_cycle[x]) > tol) continue;
        depth[i][x] = depth[i][y] + 1;
        parent[i][x] = id;
        queue.push_back(x);
      }
    }
  }

  component.assign(n, none);
  entering.assign(n, std::nullopt);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& cycle = zs.cycles[i];
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      component[cycle[(k + 1) % cycle.size()]] = i;
      entering[cycle[(k + 1) % cycle.size()]] = zs.zero_edge[cycle[k]];
    }
  }
  for (VertexId x = 0; x < n; ++x) {
    if (zs.on_cycle(x)) continue;
    for (std::size_t i = 0; i < m; ++i) {
      if (depth[i][x] != none) {
        component[x] = i;
        entering[x] = parent[i][x];
        break;
      }
    }
    if (component[x] == none) return false;
  }
  // Parents must share the component; guards inputs that are not 1-Lipschitz.
  for (VertexId x = 0; x < n; ++x) {
    if (component[g.edge(*entering[x]).from] != component[x]) return false;
  }
  return true;
}

}  // namespace

std::vector<double> hj_residual(const Graph& g, const Potential& w) {
  require_total(g, w);
  std::vector<double> residual(g.vertex_count());
  for (VertexId x = 0; x < g.vertex_count(); ++x) {
    double out_min = kInfinity, in_min = kInfinity;
    for (const EdgeId id : g.out_edges(x)) out_min = std::min(out_min, g.edge(id).delta);
    for (const EdgeId id : g.in_edges(x)) {
      const Edge& e = g.edge(id);
      in_min = std::min(in_min, w[e.from] + e.delta);
    }
    residual[x] = w[x] + out_min - in_min;
  }
  return residual;
}

std::string_view face_name(Face f) noexcept {
  switch (f) {
    case Face::maximal: return "maximal";
    case Face::minimal: return "minimal";
    case Face::other: return "other";
  }
  return "other";
}

SolutionReport check_solution(const Graph& g, const Quasimetric& q, const ZeroStructure& zs,
                              const Potential& w, double tol) {
  require_total(g, w);
  const std::size_t n = g.vertex_count();
  SolutionReport r;

  std::vector<bool> in_skeleton(g.edge_count(), false);
  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    const Edge& e = g.edge(id);
    const double excess = w[e.to] - w[e.from] - e.delta;
    if (excess > tol) r.violations.push_back({id, excess});
    if (std::abs(excess) <= tol) {
      in_skeleton[id] = true;
      r.skeleton.push_back(id);
    }
  }
  r.is_subsolution = r.violations.empty();

  r.witness_edge.assign(n, std::nullopt);
  for (VertexId x = 0; x < n; ++x) {
    for (const EdgeId id : g.in_edges(x)) {
      if (in_skeleton[id]) {
        r.witness_edge[x] = id;
        break;
      }
    }
  }
  r.is_supersolution = std::all_of(r.witness_edge.begin(), r.witness_edge.end(),
                                   [](const auto& e) { return e.has_value(); });
  r.is_solution = r.is_subsolution && r.is_supersolution;

  Lambda lambda;
  bool constant_on_cycles = true;
  for (const auto& cycle : zs.cycles) {
    double lo = w[cycle.front()], hi = lo;
    for (const VertexId v : cycle) {
      lo = std::min(lo, w[v]);
      hi = std::max(hi, w[v]);
    }
    if (hi - lo > tol) constant_on_cycles = false;
    lambda.values.push_back(w[cycle.front()]);
  }
  if (constant_on_cycles) r.lambda = lambda;

  // Pruned skeleton: following witness edges backwards from any vertex must
  // end on a zero cycle of C, and W must equal omega + lambda on each piece.
  r.decomposition_component.assign(n, std::nullopt);
  if (r.is_supersolution) {
    bool valid = true;
    std::vector<std::optional<std::size_t>>& comp = r.decomposition_component;
    for (VertexId start = 0; start < n && valid; ++start) {
      std::vector<VertexId> walk;
      std::vector<std::size_t> position(n, static_cast<std::size_t>(-1));
      VertexId v = start;
      while (!comp[v] && position[v] == static_cast<std::size_t>(-1)) {
        position[v] = walk.size();
        walk.push_back(v);
        v = g.edge(*r.witness_edge[v]).from;
      }
      if (!comp[v]) {
        // Closed a new cycle: walk[position[v]..] in reverse edge direction.
        const std::vector<VertexId> cycle(walk.begin() + static_cast<std::ptrdiff_t>(position[v]), walk.end());
        const auto ci = zs.cycle_of[v];
        bool matches = ci && zs.cycles[*ci].size() == cycle.size();
        for (const VertexId c : cycle) {
          matches = matches && zs.cycle_of[c] == ci && is_zero(g.edge(*r.witness_edge[c]).delta, tol);
        }
        if (!matches) {
          valid = false;
          break;
        }
        for (const VertexId c : cycle) comp[c] = ci;
      }
      for (const VertexId u : walk) {
        if (!comp[u]) comp[u] = comp[v];
      }
    }
    if (valid) {
      for (std::size_t i = 0; i < zs.cycle_count(); ++i) {
        bool used = false;
        std::vector<std::optional<EdgeId>> entering(n);
        for (VertexId v = 0; v < n; ++v) {
          if (comp[v] == i) {
            entering[v] = r.witness_edge[v];
            used = true;
          }
        }
        if (!used) continue;
        const Potential omega = component_potential(g, zs, i, entering);
        const double level = w[zs.cycles[i].front()];
        for (VertexId v = 0; v < n; ++v) {
          if (comp[v] == i && std::abs(w[v] - omega[v] - level) > tol * static_cast<double>(n))
            valid = false;
        }
      }
    }
    r.decomposition_valid = valid;
  }

  r.face = Face::other;
  if (r.is_subsolution && r.lambda &&
      find_geodetic_family(g, q, zs, w, *r.lambda, in_skeleton, tol, r.family_component,
                           r.family_entering_edge)) {
    r.face = Face::maximal;
  } else {
    r.family_component.clear();
    r.family_entering_edge.clear();
    if (r.is_subsolution && r.lambda) {
      bool flat = true;
      for (VertexId v = 0; v < n; ++v) {
        if (std::abs(w[v] - (*r.lambda)[zs.basin_of[v]]) > tol) flat = false;
      }
      if (flat) r.face = Face::minimal;
    }
  }
  return r;
}

Potential quasipotential(const Graph& g, const Quasimetric& q, const ZeroStructure& zs,
                         std::size_t cycle_index) {
  (void)g;
  return Potential(distance_from_cycle(q, zs, cycle_index));
}

bool lambda_feasible(const Quasimetric& q, const ZeroStructure& zs, const Lambda& lambda, double tol) {
  require_lambda_size(zs, lambda);
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    for (std::size_t j = 0; j < lambda.size(); ++j) {
      if (i != j && lambda[i] - lambda[j] > cycle_distance(q, zs, j, i) + tol) return false;
    }
  }
  return true;
}

Potential solution_from_lambda(const Graph& g, const Quasimetric& q, const ZeroStructure& zs,
                               const Lambda& lambda, double tol) {
  require_lambda_size(zs, lambda);
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    for (std::size_t j = 0; j < lambda.size(); ++j) {
      if (i == j) continue;
      const double d = cycle_distance(q, zs, j, i);
      const double slack = d - (lambda[i] - lambda[j]);
      if (slack < -tol)
        throw Error(ErrorCode::infeasible_lambda,
                    "lambda_" + std::to_string(i) + " - lambda_" + std::to_string(j) +
                        " exceeds d(C_" + std::to_string(j) + ", C_" + std::to_string(i) + ")",
                    {{"i", i}, {"j", j}, {"slack", slack}, {"distance", d}});
    }
  }
  Potential w(g.vertex_count(), kInfinity);
  for (std::size_t i = 0; i < zs.cycle_count(); ++i) {
    const auto d = distance_from_cycle(q, zs, i);
    for (VertexId x = 0; x < g.vertex_count(); ++x) w[x] = std::min(w[x], d[x] + lambda[i]);
  }
  return w;
}

Lambda lambda_from_solution(const Graph& g, const ZeroStructure& zs, const Potential& w, double tol) {
  require_total(g, w);
  Lambda lambda;
  for (std::size_t i = 0; i < zs.cycle_count(); ++i) {
    const auto& cycle = zs.cycles[i];
    for (const VertexId v : cycle) {
      if (std::abs(w[v] - w[cycle.front()]) > tol)
        throw Error(ErrorCode::not_constant_on_cycle,
                    "potential is not constant on cycle " + std::to_string(i),
                    {{"cycle", i}, {"vertex", g.name(v)}});
    }
    lambda.values.push_back(w[cycle.front()]);
  }
  return lambda;
}

Potential minimal_solution(const Graph& g, const Quasimetric& q, const ZeroStructure& zs) {
  return solution_from_lambda(g, q, zs, Lambda{std::vector<double>(zs.cycle_count(), 0.0)});
}

Graph meta_graph(const Quasimetric& q, const ZeroStructure& zs) {
  const std::size_t m = zs.cycle_count();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < m; ++i) names.push_back("C" + std::to_string(i));
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (a != b) edges.push_back({a, b, cycle_distance(q, zs, a, b), 1.0});
    }
  }
  return Graph(std::move(names), std::move(edges));
}

Lambda meta_fw(const Graph& g, const Quasimetric& q, const ZeroStructure& zs) {
  (void)g;
  if (zs.cycle_count() == 1) return Lambda{{0.0}};
  return Lambda{fw_solution(meta_graph(q, zs)).values};
}

std::size_t lip1_dimension(const ZeroStructure& zs) {
  std::size_t n = zs.basin_of.size();
  for (const auto& c : zs.cycles) n -= c.size() - 1;
  return n;
}

nlohmann::json to_json(const Graph& g, const SolutionReport& r) {
  auto edge_json = [&](EdgeId id) {
    return nlohmann::json::array({g.name(g.edge(id).from), g.name(g.edge(id).to)});
  };
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : r.violations) violations.push_back({{"edge", edge_json(v.edge)}, {"excess", v.excess}});
  nlohmann::json witness = nlohmann::json::object();
  for (VertexId x = 0; x < g.vertex_count(); ++x)
    witness[g.name(x)] = r.witness_edge[x] ? edge_json(*r.witness_edge[x]) : nlohmann::json(nullptr);
  nlohmann::json skeleton = nlohmann::json::array();
  for (const EdgeId id : r.skeleton) skeleton.push_back(edge_json(id));

  nlohmann::json out = {{"is_subsolution", r.is_subsolution},
                        {"violations", std::move(violations)},
                        {"is_supersolution", r.is_supersolution},
                        {"witness_edge", std::move(witness)},
                        {"skeleton", std::move(skeleton)},
                        {"is_solution", r.is_solution},
                        {"lambda", r.lambda ? nlohmann::json(r.lambda->values) : nlohmann::json(nullptr)},
                        {"face", std::string(face_name(r.face))}};
  if (r.face == Face::maximal) {
    nlohmann::json family = nlohmann::json::object();
    for (VertexId x = 0; x < g.vertex_count(); ++x)
      family[g.name(x)] = {{"component", r.family_component[x]},
                           {"entering_edge", edge_json(*r.family_entering_edge[x])}};
    out["family"] = std::move(family);
  }
  return out;
}

}  // namespace dhj
