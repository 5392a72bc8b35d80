#pragma once

#include <cstddef>
#include <vector>

#include "dhj/arborescence.hpp"
#include "dhj/graph.hpp"
#include "dhj/potential.hpp"

namespace dhj {

struct ReversibleData {
  /// delta_field[e] = delta(e) - delta(reverse of e), per edge id.
  std::vector<double> delta_field;
  bool is_gradient = false;
  VertexId base_vertex = 0;
  /// Largest |sum of delta_field| over the fundamental cycles.
  double max_cycle_defect = 0.0;
};

/// Gradient test on the fundamental cycles of a BFS spanning tree of the
/// underlying undirected graph. Throws non-reversible-edge-set.
ReversibleData gradient_condition(const Graph& g, double tol = kDefaultTolerance, VertexId base_vertex = 0);

/// sum of delta_field along a geodesic from the base vertex, shifted to min 0.
/// Throws gradient-condition-violated.
Potential reversible_fw(const Graph& g, const ReversibleData& rd);

struct ReversibleStructureReport {
  bool cycles_have_length_two = false;
  bool skeleton_is_reversed_zero_map = false;
  /// Path reversal maps T_x onto T_y for every checked ordered pair.
  bool bijection_holds = false;
  /// delta(tau_y) - delta(tau_x) = FW(y) - FW(x) on every matched pair.
  bool weight_identity_holds = false;
  /// Minimizers of every T_z share one set of unoriented supports.
  bool minimizers_share_support = false;
  std::size_t pairs_checked = 0;
  std::size_t matched_arborescences = 0;
  double max_weight_defect = 0.0;

  bool all_pass() const noexcept {
    return cycles_have_length_two && skeleton_is_reversed_zero_map && bijection_holds &&
           weight_identity_holds && minimizers_share_support;
  }
};

/// Reverse the edges of the unique path from y to x in tau (tau in T_x).
std::vector<EdgeId> reverse_path_to_root(const Graph& g, const Arborescence& tau, VertexId y);

ReversibleStructureReport reversible_structure_checks(const Graph& g, const ReversibleData& rd,
                                                      double tol = kDefaultTolerance,
                                                      std::size_t cap = kEnumerationCap);

/// Ring on vertices 1..k. forward[i] = delta(i+1, i+2) and backward[i] =
/// delta(i+2, i+1) in 1-based labels, indices mod k.
struct RingSpec {
  std::size_t k = 0;
  std::vector<double> forward;
  std::vector<double> backward;
};

/// Throws invalid-ring for k < 3, wrong lengths or negative deltas.
void check_ring(const RingSpec& rs);
Graph ring_graph(const RingSpec& rs);

/// FW(x) = min_{x <= y < x+k} { S(x) - S(y) - delta(y, y+1) }, shifted to min 0,
/// with S(x) the cumulative sum of delta(y, y+1) - delta(y+1, y).
/// Throws assumption-violated when the ring graph has a vertex without
/// exactly one zero out-edge.
Potential ring_fw(const RingSpec& rs, double tol = kDefaultTolerance);

RingSpec ring_from_json(const nlohmann::json& j);

}  // namespace dhj
