#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dhj/arborescence.hpp"
#include "dhj/graph.hpp"

namespace dhj {

/// Below this a rate is treated as underflowed and dense elimination refuses.
inline constexpr double kMinRepresentableRate = 1e-300;

/// r_N(x, y) = prefactor(x, y) * exp(-N delta(x, y)).
class RateModel {
 public:
  RateModel(const Graph& g, double N);

  double N() const noexcept { return N_; }
  double rate(EdgeId e) const { return rates_.at(e); }
  double exit_rate(VertexId x) const { return exit_.at(x); }
  double min_rate() const noexcept { return min_rate_; }
  const std::vector<double>& rates() const noexcept { return rates_; }

 private:
  double N_;
  std::vector<double> rates_;
  std::vector<double> exit_;
  double min_rate_;
};

struct StationaryResult {
  std::vector<double> pi;
  /// ||pi Q||_inf for the generator Q of the rate model.
  double residual = 0.0;
};

/// Solves pi Q = 0, sum pi = 1 by Grassmann-Taksar-Heyman state reduction
/// (Gaussian elimination on the generator without subtractions). Throws
/// underflow-regime when some rate is below kMinRepresentableRate and
/// singular-system when elimination meets a zero pivot.
StationaryResult stationary_measure(const Graph& g, double N);

/// sum_x |p(x) - q(x)| / 2
double total_variation(std::span<const double> p, std::span<const double> q);

enum class MeasureMethod { linear_solve, matrix_tree };
std::string_view method_name(MeasureMethod m) noexcept;

struct ViscosityRow {
  double N = 0.0;
  /// ||(W_N - min W_N) - FW||_inf with W_N = -(1/N) log pi_N.
  double error = 0.0;
  /// ln(max_x |T_x|) / N, when |V| fits the enumeration cap.
  std::optional<double> envelope;
  MeasureMethod method = MeasureMethod::linear_solve;
  std::vector<double> w_normalized;
};

/// W_N = -(1/N) log pi_N, normalized to min 0; linear solve when in range and
/// Matrix Tree otherwise.
std::vector<double> finite_n_potential(const Graph& g, double N, MeasureMethod* used = nullptr,
                                       std::size_t cap = kEnumerationCap);

/// Throws invalid-argument unless the list is positive and sorted.
std::vector<ViscosityRow> viscosity_sweep(const Graph& g, std::span<const double> n_list,
                                          std::size_t cap = kEnumerationCap);

}  // namespace dhj
