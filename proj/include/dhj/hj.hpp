#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "dhj/graph.hpp"
#include "dhj/potential.hpp"
#include "dhj/quasimetric.hpp"
#include "dhj/zero_structure.hpp"

namespace dhj {

/// Cycle-level parameters lambda_i, indexed like ZeroStructure::cycles.
struct Lambda {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  friend bool operator==(const Lambda&, const Lambda&) = default;
};

/// residual(x) = [W(x) + min_out delta(x, .)] - min_{(y,x) in E} [W(y) + delta(y, x)].
/// Zero everywhere iff W solves the discrete HJ equation.
std::vector<double> hj_residual(const Graph& g, const Potential& w);

enum class Face { maximal, minimal, other };
std::string_view face_name(Face f) noexcept;

struct SubsolutionViolation {
  /// Edge (y, x) with W(x) - W(y) > delta(y, x) + tol.
  EdgeId edge = 0;
  double excess = 0.0;
};

struct SolutionReport {
  bool is_subsolution = false;
  std::vector<SubsolutionViolation> violations;

  bool is_supersolution = false;
  /// Lowest-id skeleton edge entering each vertex, if any.
  std::vector<std::optional<EdgeId>> witness_edge;
  /// All edges (y, x) with |W(x) - W(y) - delta(y, x)| <= tol.
  std::vector<EdgeId> skeleton;

  bool is_solution = false;
  /// W read on each cycle; empty when W is not constant on some cycle.
  std::optional<Lambda> lambda;

  /// Supersolution decomposition: witness edges form a spanning disjoint
  /// union of out-unicyclic components with cycles in C, and
  /// W = sum_i (omega_i + lambda_i 1_i). Meaningful only for supersolutions.
  bool decomposition_valid = false;
  std::vector<std::optional<std::size_t>> decomposition_component;

  Face face = Face::other;
  /// For Face::maximal: component (cycle index) and entering skeleton edge
  /// of each vertex in the spanning geodetic out-unicyclic family.
  std::vector<std::size_t> family_component;
  std::vector<std::optional<EdgeId>> family_entering_edge;
};

SolutionReport check_solution(const Graph& g, const Quasimetric& q, const ZeroStructure& zs,
                              const Potential& w, double tol = kDefaultTolerance);

/// W_C(x) = d(C, x). Throws invalid-cycle-index.
Potential quasipotential(const Graph& g, const Quasimetric& q, const ZeroStructure& zs,
                         std::size_t cycle_index);

/// Is lambda_i - lambda_j <= d(C_j, C_i) + tol for all i != j?
bool lambda_feasible(const Quasimetric& q, const ZeroStructure& zs, const Lambda& lambda,
                     double tol = kDefaultTolerance);

/// W_lambda = min_i (W_{C_i} + lambda_i). Throws infeasible-lambda carrying the
/// violated pair (i, j) and its slack.
Potential solution_from_lambda(const Graph& g, const Quasimetric& q, const ZeroStructure& zs,
                               const Lambda& lambda, double tol = kDefaultTolerance);

/// lambda_i = W on C_i. Throws not-constant-on-cycle.
Lambda lambda_from_solution(const Graph& g, const ZeroStructure& zs, const Potential& w,
                            double tol = kDefaultTolerance);

/// The minimal normalized solution, W_lambda with lambda = 0.
Potential minimal_solution(const Graph& g, const Quasimetric& q, const ZeroStructure& zs);

/// Complete digraph on the cycles with weights d(C_a, C_b), named "C0", "C1"...
Graph meta_graph(const Quasimetric& q, const ZeroStructure& zs);

/// FW of the meta graph, so that solution_from_lambda(meta_fw) == fw_solution.
Lambda meta_fw(const Graph& g, const Quasimetric& q, const ZeroStructure& zs);

/// |V| - sum_i (|C_i| - 1), the dimension of the 1-Lipschitz polyhedron.
std::size_t lip1_dimension(const ZeroStructure& zs);

nlohmann::json to_json(const Graph& g, const SolutionReport& report);

}  // namespace dhj
