#include "dhj/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dhj/potential.hpp"

namespace dhj {

RateModel::RateModel(const Graph& g, double N)
    : N_(N), rates_(g.edge_count()), exit_(g.vertex_count(), 0.0), min_rate_(std::numeric_limits<double>::infinity()) {
  if (!(N > 0.0)) throw Error(ErrorCode::invalid_argument, "N must be positive");
  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    const Edge& e = g.edge(id);
    rates_[id] = e.prefactor * std::exp(-N * e.delta);
    exit_[e.from] += rates_[id];
    min_rate_ = std::min(min_rate_, rates_[id]);
  }
}

StationaryResult stationary_measure(const Graph& g, double N) {
  if (!is_strongly_connected(g))
    throw Error(ErrorCode::not_strongly_connected, "invariant measure requires a strongly connected graph");
  const RateModel model(g, N);
  if (model.min_rate() < kMinRepresentableRate)
    throw Error(ErrorCode::underflow_regime,
                "rates underflow at N = " + std::to_string(N) + "; use the Matrix Tree measure",
                {{"N", N}, {"min_rate", model.min_rate()}});

  const std::size_t n = g.vertex_count();
  // a[i][j]: off-diagonal rates of the progressively reduced chain.
  std::vector<double> a(n * n, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
  for (EdgeId id = 0; id < g.edge_count(); ++id) at(g.edge(id).from, g.edge(id).to) = model.rate(id);

  std::vector<double> pivot(n, 0.0);
  for (std::size_t k = n; k-- > 1;) {
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += at(k, j);
    if (!(s > 0.0))
      throw Error(ErrorCode::singular_system, "zero pivot during state reduction", {{"state", g.name(k)}});
    pivot[k] = s;
    for (std::size_t i = 0; i < k; ++i) {
      const double through = at(i, k) / s;
      if (through == 0.0) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (i != j) at(i, j) += through * at(k, j);
      }
    }
  }
  std::vector<double> pi(n, 0.0);
  pi[0] = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    double inflow = 0.0;
    for (std::size_t i = 0; i < k; ++i) inflow += pi[i] * at(i, k);
    pi[k] = inflow / pivot[k];
  }
  double total = 0.0;
  for (const double p : pi) total += p;
  for (double& p : pi) p /= total;

  std::vector<double> flow(n, 0.0);
  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    const Edge& e = g.edge(id);
    flow[e.to] += pi[e.from] * model.rate(id);
  }
  double residual = 0.0;
  for (VertexId x = 0; x < n; ++x)
    residual = std::max(residual, std::abs(flow[x] - pi[x] * model.exit_rate(x)));
  return {std::move(pi), residual};
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error(ErrorCode::invalid_argument, "measures differ in size");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return sum / 2.0;
}

std::string_view method_name(MeasureMethod m) noexcept {
  return m == MeasureMethod::linear_solve ? "linear_solve" : "matrix_tree";
}

std::vector<double> finite_n_potential(const Graph& g, double N, MeasureMethod* used, std::size_t cap) {
  const std::size_t n = g.vertex_count();
  std::vector<double> logs;
  MeasureMethod method = MeasureMethod::linear_solve;
  const RateModel model(g, N);
  if (model.min_rate() >= kMinRepresentableRate) {
    const auto result = stationary_measure(g, N);
    if (std::all_of(result.pi.begin(), result.pi.end(), [](double p) { return p > 0.0 && std::isfinite(p); })) {
      for (const double p : result.pi) logs.push_back(std::log(p));
    }
  }
  if (logs.size() != n) {
    method = MeasureMethod::matrix_tree;
    logs = log_matrix_tree_measure(g, N, cap);
  }
  if (used) *used = method;
  std::vector<double> w(n);
  for (std::size_t x = 0; x < n; ++x) w[x] = -logs[x] / N;
  return normalized(Potential(std::move(w))).values;
}

std::vector<ViscosityRow> viscosity_sweep(const Graph& g, std::span<const double> n_list, std::size_t cap) {
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (!(n_list[i] > 0.0)) throw Error(ErrorCode::invalid_argument, "N values must be positive");
    if (i > 0 && n_list[i] < n_list[i - 1]) throw Error(ErrorCode::invalid_argument, "N list must be sorted");
  }
  const Potential fw = fw_solution(g);
  std::optional<double> log_max_count;
  if (g.vertex_count() <= cap) {
    std::size_t most = 0;
    for (VertexId x = 0; x < g.vertex_count(); ++x)
      most = std::max(most, enumerate_arborescences(g, x, cap).size());
    log_max_count = std::log(static_cast<double>(most));
  }

  std::vector<ViscosityRow> rows;
  for (const double N : n_list) {
    ViscosityRow row;
    row.N = N;
    row.w_normalized = finite_n_potential(g, N, &row.method, cap);
    row.error = max_norm_distance(Potential(row.w_normalized), fw);
    if (log_max_count) row.envelope = *log_max_count / N;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace dhj
