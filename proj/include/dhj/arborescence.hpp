#pragma once

#include <cstddef>
#include <vector>

#include "dhj/graph.hpp"
#include "dhj/potential.hpp"

namespace dhj {

inline constexpr std::size_t kEnumerationCap = 10;
inline constexpr std::size_t kLiftCap = 6;

/// Spanning subgraph where every vertex but `root` has exactly one out-edge
/// and every path ends at `root`.
struct Arborescence {
  VertexId root = 0;
  /// Edge ids in ascending (canonical) order.
  std::vector<EdgeId> edges;
  /// Sum of deltas, accumulated in canonical edge order.
  double weight_sum = 0.0;

  /// sum over edges of log(prefactor) - N * delta.
  double log_weight(const Graph& g, double N) const;

  friend bool operator==(const Arborescence&, const Arborescence&) = default;
};

/// Builds an Arborescence from an edge set; sorts and sums in canonical order.
Arborescence make_arborescence(const Graph& g, VertexId root, std::vector<EdgeId> edges);

/// True if `edges` is an arborescence of g directed toward root.
bool is_arborescence(const Graph& g, VertexId root, const std::vector<EdgeId>& edges);

/// All of T_root, by backtracking over one out-edge per non-root vertex in
/// vertex order with cycle rejection. Throws size-cap-exceeded when
/// |V| > cap.
std::vector<Arborescence> enumerate_arborescences(const Graph& g, VertexId root,
                                                  std::size_t cap = kEnumerationCap);

/// Minimum-delta arborescence toward root (Chu-Liu/Edmonds contraction on
/// the reversed graph). Throws not-strongly-connected.
Arborescence min_arborescence(const Graph& g, VertexId root);

/// FW(x) = min_{T_x} delta - min_{T} delta.
Potential fw_solution(const Graph& g);

/// log pi_N(x) from the Matrix Tree formula, evaluated with log-sum-exp.
std::vector<double> log_matrix_tree_measure(const Graph& g, double N,
                                            std::size_t cap = kEnumerationCap);
std::vector<double> matrix_tree_measure(const Graph& g, double N, std::size_t cap = kEnumerationCap);

double log_sum_exp(const std::vector<double>& terms);

/// Markov chain on arborescences whose stationary law is proportional to the
/// product of edge rates and projects onto pi_N.
struct LiftedChain {
  struct Transition {
    std::size_t from = 0;
    std::size_t to = 0;
    EdgeId projected_edge = 0;
    double rate = 0.0;
  };

  std::vector<Arborescence> nodes;
  std::vector<Transition> transitions;
  std::vector<double> stationary;
  std::vector<std::size_t> in_degree;
  std::vector<std::size_t> out_degree;
  bool strongly_connected = false;
  /// max over nodes of |(stationary * generator)(node)|.
  double stationarity_residual = 0.0;
  /// sum of stationary over T_x, per vertex x.
  std::vector<double> projected_marginal;

  bool eulerian() const { return in_degree == out_degree; }
};

LiftedChain build_lifted_chain(const Graph& g, double N, std::size_t cap = kLiftCap);

nlohmann::json to_json(const Graph& g, const Arborescence& a);

}  // namespace dhj
