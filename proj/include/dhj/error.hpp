#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace dhj {

/// Default absolute tolerance for every "equals" test on weights and potentials.
inline constexpr double kDefaultTolerance = 1e-9;

enum class ErrorCode {
  malformed_json,
  negative_delta,
  nonpositive_prefactor,
  duplicate_edge,
  duplicate_vertex,
  self_loop,
  unknown_vertex,
  not_strongly_connected,
  empty_set,
  assumption_violated,
  invalid_cycle_index,
  size_cap_exceeded,
  missing_vertex,
  infeasible_lambda,
  not_constant_on_cycle,
  non_edge_transition,
  invalid_trajectory,
  underflow_regime,
  singular_system,
  non_reversible_edge_set,
  gradient_condition_violated,
  invalid_ring,
  invalid_argument,
};

/// Kebab-case name used in CLI payloads, e.g. "negative-delta".
std::string_view error_name(ErrorCode code) noexcept;

/// The single exception type thrown by the library. `context` carries
/// machine-readable details (offending vertex, violated pair, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        nlohmann::json context = nlohmann::json::object())
      : std::runtime_error(message), code_(code), context_(std::move(context)) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }
  const nlohmann::json& context() const noexcept { return context_; }

 private:
  ErrorCode code_;
  nlohmann::json context_;
};

}  // namespace dhj
