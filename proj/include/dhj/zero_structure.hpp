#pragma once

#include <optional>
#include <vector>

#include "dhj/graph.hpp"
#include "dhj/potential.hpp"
#include "dhj/quasimetric.hpp"

namespace dhj {

/// The zero map (V, E0), its cycles and basins.
struct ZeroStructure {
  /// E0 as a successor function: the unique zero out-edge of each vertex.
  std::vector<EdgeId> zero_edge;
  std::vector<VertexId> zero_successor;
  /// Each cycle starts at its smallest vertex and follows E0; the list is
  /// sorted by smallest member.
  std::vector<std::vector<VertexId>> cycles;
  /// Cycle reached by following E0 (in-unicyclic component u_i).
  std::vector<std::size_t> basin_of;
  /// argmin_i d(C_i, x), ties to the lowest index.
  std::vector<std::size_t> exiting_basin_of;
  /// Cycle index for vertices lying on a cycle.
  std::vector<std::optional<std::size_t>> cycle_of;

  std::size_t cycle_count() const noexcept { return cycles.size(); }
  bool on_cycle(VertexId v) const { return cycle_of[v].has_value(); }
};

/// Throws assumption-violated unless every vertex has exactly one zero
/// out-edge (within tol).
ZeroStructure zero_structure(const Graph& g, const Quasimetric& q, double tol = kDefaultTolerance);

/// d(C_i, x) for every x.
std::vector<double> distance_from_cycle(const Quasimetric& q, const ZeroStructure& zs, std::size_t i);

/// d(C_from, C_to).
double cycle_distance(const Quasimetric& q, const ZeroStructure& zs, std::size_t from, std::size_t to);

struct OutUnicyclicComponent {
  std::size_t cycle_index = 0;
  /// Cycle edges followed by one entering edge per non-cycle vertex.
  std::vector<EdgeId> edges;
  /// Entering edge of each vertex inside the component (cycle edge for cycle
  /// vertices); empty for vertices outside it.
  std::vector<std::optional<EdgeId>> entering_edge;
  /// 0 on the cycle and off the component; omega(a) - omega(b) = delta(b, a)
  /// along component edges.
  Potential omega;
};

/// Spanning geodetic out-unicyclic graph rooted at cycle `cycle_index`, built
/// from a multi-source shortest-path tree out of the cycle. Throws
/// invalid-cycle-index.
OutUnicyclicComponent geodetic_out_component(const Graph& g, const Quasimetric& q,
                                             const ZeroStructure& zs, std::size_t cycle_index);

/// omega for an arbitrary out-unicyclic component given by its entering
/// edges (non-cycle vertices only need one; members not reached stay 0).
Potential component_potential(const Graph& g, const ZeroStructure& zs, std::size_t cycle_index,
                              const std::vector<std::optional<EdgeId>>& entering_edge);

nlohmann::json to_json(const Graph& g, const ZeroStructure& zs);

}  // namespace dhj
