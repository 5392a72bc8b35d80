#include "dhj/error.hpp"

namespace dhj {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::malformed_json: return "malformed-json";
    case ErrorCode::negative_delta: return "negative-delta";
    case ErrorCode::nonpositive_prefactor: return "nonpositive-prefactor";
    case ErrorCode::duplicate_edge: return "duplicate-edge";
    case ErrorCode::duplicate_vertex: return "duplicate-vertex";
    case ErrorCode::self_loop: return "self-loop";
    case ErrorCode::unknown_vertex: return "unknown-vertex";
    case ErrorCode::not_strongly_connected: return "not-strongly-connected";
    case ErrorCode::empty_set: return "empty-set";
    case ErrorCode::assumption_violated: return "assumption-violated";
    case ErrorCode::invalid_cycle_index: return "invalid-cycle-index";
    case ErrorCode::size_cap_exceeded: return "size-cap-exceeded";
    case ErrorCode::missing_vertex: return "missing-vertex";
    case ErrorCode::infeasible_lambda: return "infeasible-lambda";
    case ErrorCode::not_constant_on_cycle: return "not-constant-on-cycle";
    case ErrorCode::non_edge_transition: return "non-edge-transition";
    case ErrorCode::invalid_trajectory: return "invalid-trajectory";
    case ErrorCode::underflow_regime: return "underflow-regime";
    case ErrorCode::singular_system: return "singular-system";
    case ErrorCode::non_reversible_edge_set: return "non-reversible-edge-set";
    case ErrorCode::gradient_condition_violated: return "gradient-condition-violated";
    case ErrorCode::invalid_ring: return "invalid-ring";
    case ErrorCode::invalid_argument: return "invalid-argument";
  }
  return "unknown";
}

}  // namespace dhj
