#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dhj/graph.hpp"
#include "dhj/potential.hpp"

namespace dhj {

/// Piecewise-constant path (x_0, ..., x_n); jump times are carried along but
/// never enter the action.
struct Trajectory {
  std::vector<VertexId> states;
  std::optional<std::vector<double>> jump_times;
};

/// Sum of delta over consecutive states. Throws non-edge-transition, or
/// invalid-trajectory for empty state lists and malformed jump times.
double path_action(const Graph& g, const Trajectory& traj);

/// (LV)(x) = min over in-edges (y, x) of V(y) + delta(y, x).
Potential lax_oleinik_step(const Graph& g, const Potential& v);

struct FixedPointResult {
  Potential potential;
  /// Applications of L needed to reach the returned iterate.
  std::size_t steps = 0;
  bool converged = false;
};

/// Iterates V_{k+1} = L V_k until ||V_{k+1} - V_k||_inf <= tol with
/// k <= max_steps; otherwise returns V_{max_steps} with converged = false.
FixedPointResult iterate_to_fixed_point(const Graph& g, const Potential& v0, std::size_t max_steps,
                                        double tol = kDefaultTolerance);

}  // namespace dhj
