#include "dhj/semigroup.hpp"

#include <algorithm>
#include <string>

#include "dhj/quasimetric.hpp"

namespace dhj {

double path_action(const Graph& g, const Trajectory& traj) {
  if (traj.states.empty()) throw Error(ErrorCode::invalid_trajectory, "trajectory has no states");
  for (const VertexId v : traj.states) {
    if (v >= g.vertex_count()) throw Error(ErrorCode::unknown_vertex, "trajectory state out of range");
  }
  if (traj.jump_times) {
    const auto& t = *traj.jump_times;
    if (t.size() + 1 != traj.states.size())
      throw Error(ErrorCode::invalid_trajectory, "need one jump time per transition");
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] < 0.0 || (i > 0 && !(t[i] > t[i - 1])))
        throw Error(ErrorCode::invalid_trajectory, "jump times must be nonnegative and strictly increasing");
    }
  }
  double action = 0.0;
  for (std::size_t i = 0; i + 1 < traj.states.size(); ++i) {
    const VertexId a = traj.states[i], b = traj.states[i + 1];
    const auto id = g.find_edge(a, b);
    if (!id)
      throw Error(ErrorCode::non_edge_transition,
                  "no edge (" + g.name(a) + "," + g.name(b) + ")",
                  {{"from", g.name(a)}, {"to", g.name(b)}, {"step", i}});
    action += g.edge(*id).delta;
  }
  return action;
}

Potential lax_oleinik_step(const Graph& g, const Potential& v) {
  if (v.size() != g.vertex_count())
    throw Error(ErrorCode::missing_vertex, "potential does not cover every vertex");
  Potential out(g.vertex_count(), kInfinity);
  for (const Edge& e : g.edges()) out[e.to] = std::min(out[e.to], v[e.from] + e.delta);
  return out;
}

FixedPointResult iterate_to_fixed_point(const Graph& g, const Potential& v0, std::size_t max_steps,
                                        double tol) {
  if (max_steps < 1) throw Error(ErrorCode::invalid_argument, "max_steps must be at least 1");
  Potential current = v0;
  for (std::size_t k = 0; k <= max_steps; ++k) {
    Potential next = lax_oleinik_step(g, current);
    if (max_norm_distance(next, current) <= tol) return {std::move(current), k, true};
    if (k == max_steps) break;
    current = std::move(next);
  }
  return {std::move(current), max_steps, false};
}

}  // namespace dhj
