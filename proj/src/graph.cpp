#include "dhj/graph.hpp"

#include <algorithm>
#include <istream>
#include <iterator>
#include <sstream>

namespace dhj {

namespace {

nlohmann::json edge_context(const std::vector<std::string>& names, const Edge& e) {
  return {{"from", names[e.from]}, {"to", names[e.to]}};
}

}  // namespace

Graph::Graph(std::vector<std::string> vertex_names, std::vector<Edge> edges)
    : names_(std::move(vertex_names)), edges_(std::move(edges)) {
  for (VertexId v = 0; v < names_.size(); ++v) {
    if (!index_.emplace(names_[v], v).second)
      throw Error(ErrorCode::duplicate_vertex, "duplicate vertex '" + names_[v] + "'",
                  {{"vertex", names_[v]}});
  }
  const std::size_t n = names_.size();
  for (const Edge& e : edges_) {
    if (e.from >= n || e.to >= n)
      throw Error(ErrorCode::unknown_vertex, "edge endpoint out of range");
    if (e.from == e.to)
      throw Error(ErrorCode::self_loop, "self-loop at vertex '" + names_[e.from] + "'",
                  edge_context(names_, e));
    if (!(e.delta >= 0.0))
      throw Error(ErrorCode::negative_delta,
                  "edge (" + names_[e.from] + "," + names_[e.to] + ") has negative delta",
                  edge_context(names_, e));
    if (!(e.prefactor > 0.0))
      throw Error(ErrorCode::nonpositive_prefactor,
                  "edge (" + names_[e.from] + "," + names_[e.to] + ") has nonpositive prefactor",
                  edge_context(names_, e));
  }
  std::stable_sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.from != b.from ? a.from < b.from : a.to < b.to;
  });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].from == edges_[i - 1].from && edges_[i].to == edges_[i - 1].to)
      throw Error(ErrorCode::duplicate_edge,
                  "duplicate edge (" + names_[edges_[i].from] + "," + names_[edges_[i].to] + ")",
                  edge_context(names_, edges_[i]));
  }
  out_.resize(n);
  in_.resize(n);
  for (EdgeId id = 0; id < edges_.size(); ++id) {
    out_[edges_[id].from].push_back(id);
    in_[edges_[id].to].push_back(id);
  }
}

std::optional<VertexId> Graph::find(std::string_view name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VertexId Graph::index_of(std::string_view name) const {
  if (const auto v = find(name)) return *v;
  throw Error(ErrorCode::unknown_vertex, "unknown vertex '" + std::string(name) + "'",
              {{"vertex", std::string(name)}});
}

std::optional<EdgeId> Graph::find_edge(VertexId from, VertexId to) const {
  for (const EdgeId id : out_.at(from)) {
    if (edges_[id].to == to) return id;
  }
  return std::nullopt;
}

Graph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges") ||
      !j["vertices"].is_array() || !j["edges"].is_array())
    throw Error(ErrorCode::malformed_json,
                "graph must be an object with 'vertices' and 'edges' arrays");

  std::vector<std::string> names;
  for (const auto& v : j["vertices"]) {
    if (!v.is_string()) throw Error(ErrorCode::malformed_json, "vertex identifiers must be strings");
    names.push_back(v.get<std::string>());
  }
  std::map<std::string, VertexId, std::less<>> index;
  for (VertexId v = 0; v < names.size(); ++v) index.emplace(names[v], v);

  auto lookup = [&](const nlohmann::json& e, const char* key) -> VertexId {
    if (!e.contains(key) || !e[key].is_string())
      throw Error(ErrorCode::malformed_json, std::string("edge field '") + key + "' must be a string");
    const std::string name = e[key].get<std::string>();
    const auto it = index.find(name);
    if (it == index.end())
      throw Error(ErrorCode::unknown_vertex, "edge references unknown vertex '" + name + "'",
                  {{"vertex", name}});
    return it->second;
  };

  std::vector<Edge> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_object()) throw Error(ErrorCode::malformed_json, "edges must be objects");
    Edge edge;
    edge.from = lookup(e, "from");
    edge.to = lookup(e, "to");
    if (!e.contains("delta") || !e["delta"].is_number())
      throw Error(ErrorCode::malformed_json, "edge field 'delta' must be a number");
    edge.delta = e["delta"].get<double>();
    if (e.contains("prefactor")) {
      if (!e["prefactor"].is_number())
        throw Error(ErrorCode::malformed_json, "edge field 'prefactor' must be a number");
      edge.prefactor = e["prefactor"].get<double>();
    }
    edges.push_back(edge);
  }
  return Graph(std::move(names), std::move(edges));
}

Graph parse_graph(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_graph(std::string_view(text));
}

Graph parse_graph(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::malformed_json, std::string("malformed JSON: ") + e.what());
  }
  return graph_from_json(j);
}

nlohmann::json to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : g.edges()) {
    edges.push_back({{"from", g.name(e.from)},
                     {"to", g.name(e.to)},
                     {"delta", e.delta},
                     {"prefactor", e.prefactor}});
  }
  return {{"vertices", g.names()}, {"edges", std::move(edges)}};
}

std::vector<std::vector<VertexId>> strongly_connected_components(const Graph& g) {
  // Iterative Tarjan.
  const std::size_t n = g.vertex_count();
  constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<VertexId> stack;
  std::vector<std::vector<VertexId>> components;
  std::size_t counter = 0;

  struct Frame {
    VertexId v;
    std::size_t next;
  };
  for (VertexId start = 0; start < n; ++start) {
    if (index[start] != unvisited) continue;
    std::vector<Frame> call{{start, 0}};
    index[start] = low[start] = counter++;
    stack.push_back(start);
    on_stack[start] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto out = g.out_edges(f.v);
      if (f.next < out.size()) {
        const VertexId w = g.edge(out[f.next++]).to;
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const VertexId v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<VertexId> comp;
        VertexId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
      }
    }
  }
  return components;
}

bool is_strongly_connected(const Graph& g) {
  return g.vertex_count() > 0 && strongly_connected_components(g).size() == 1;
}

ValidationReport validate(const Graph& g, double tol) {
  ValidationReport r;
  const auto components = strongly_connected_components(g);
  r.strongly_connected = g.vertex_count() > 0 && components.size() == 1;
  if (g.vertex_count() == 0) r.violations.push_back("graph has no vertices");
  if (!r.strongly_connected && g.vertex_count() > 0) {
    std::ostringstream msg;
    msg << "graph is not strongly connected (" << components.size() << " components)";
    r.violations.push_back(msg.str());
  }
  for (const Edge& e : g.edges()) {
    if (e.from == e.to) {
      r.has_self_loop = true;
      r.violations.push_back("self-loop at vertex '" + g.name(e.from) + "'");
    }
  }
  r.zero_out_degree.assign(g.vertex_count(), 0);
  for (const Edge& e : g.edges()) {
    if (is_zero(e.delta, tol)) ++r.zero_out_degree[e.from];
  }
  r.assumption_2_3_holds = true;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (r.zero_out_degree[v] != 1) {
      r.assumption_2_3_holds = false;
      r.violations.push_back("vertex '" + g.name(v) + "' has " +
                             std::to_string(r.zero_out_degree[v]) +
                             " zero-delta out-edges (exactly one required)");
    }
  }
  return r;
}

nlohmann::json to_json(const Graph& g, const ValidationReport& report) {
  nlohmann::json zero = nlohmann::json::object();
  for (VertexId v = 0; v < g.vertex_count(); ++v) zero[g.name(v)] = report.zero_out_degree[v];
  return {{"strongly_connected", report.strongly_connected},
          {"has_self_loop", report.has_self_loop},
          {"zero_out_degree", std::move(zero)},
          {"assumption_2_3_holds", report.assumption_2_3_holds},
          {"violations", report.violations}};
}

void require_valid(const Graph& g, double tol) {
  const ValidationReport r = validate(g, tol);
  if (!r.strongly_connected)
    throw Error(ErrorCode::not_strongly_connected,
                r.violations.empty() ? "graph is not strongly connected" : r.violations.front());
  if (!r.assumption_2_3_holds) {
    std::string first;
    for (const auto& v : r.violations) {
      if (v.find("zero-delta") != std::string::npos) {
        first = v;
        break;
      }
    }
    throw Error(ErrorCode::assumption_violated, first, {{"violations", r.violations}});
  }
}

}  // namespace dhj
