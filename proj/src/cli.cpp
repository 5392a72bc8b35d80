#include "dhj/cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dhj/arborescence.hpp"
#include "dhj/error.hpp"
#include "dhj/graph.hpp"
#include "dhj/hj.hpp"
#include "dhj/numerics.hpp"
#include "dhj/potential.hpp"
#include "dhj/quasimetric.hpp"
#include "dhj/semigroup.hpp"
#include "dhj/special_cases.hpp"
#include "dhj/zero_structure.hpp"

namespace dhj::cli {

namespace {

using json = nlohmann::json;

constexpr int kSchemaVersion = 1;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::malformed_json, "malformed JSON in " + what + ": " + e.what());
  }
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Integral doubles print as integers so that 1.0 and 1 serialize alike.
json canonical_numbers(const json& j) {
  if (j.is_object()) {
    json out = json::object();
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = canonical_numbers(it.value());
    return out;
  }
  if (j.is_array()) {
    json out = json::array();
    for (const auto& v : j) out.push_back(canonical_numbers(v));
    return out;
  }
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) return nullptr;
    if (v == std::trunc(v) && std::abs(v) < 9.0e15) return static_cast<std::int64_t>(v);
  }
  return j;
}

std::string format_number(double v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

struct Context {
  std::string command;
  std::vector<std::string> inputs;
  json diagnostics = json::array();
  double tol = kDefaultTolerance;
  std::size_t max_size = kEnumerationCap;
  bool max_size_given = false;
  bool csv = false;

  std::string digest() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& text : inputs) {
      for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
      }
      h ^= 0xff;
      h *= 0x100000001b3ULL;
    }
    return "fnv1a64:" + hex64(h);
  }

  Graph load_graph(const std::string& path) {
    inputs.push_back(read_input(path));
    return parse_graph(std::string_view(inputs.back()));
  }

  json load_json(const std::string& path) {
    inputs.push_back(read_input(path));
    return parse_json(inputs.back(), path);
  }
};

struct Outcome {
  json payload;
  std::optional<std::string> csv;
};

json envelope(const Context& ctx, json payload) {
  return canonical_numbers({{"command", ctx.command},
                            {"schema_version", kSchemaVersion},
                            {"input_digest", ctx.digest()},
                            {"payload", std::move(payload)},
                            {"diagnostics", ctx.diagnostics}});
}

json error_json(const Error& e) {
  return {{"name", std::string(e.name())}, {"message", e.what()}, {"context", e.context()}};
}

struct Analysis {
  Quasimetric q;
  ZeroStructure zs;
};

Analysis analyze(const Graph& g, double tol) {
  require_valid(g, tol);
  Quasimetric q = all_pairs_distances(g);
  ZeroStructure zs = zero_structure(g, q, tol);
  return {std::move(q), std::move(zs)};
}

std::vector<std::string> names_of(const Graph& g, const std::vector<VertexId>& vs) {
  std::vector<std::string> out;
  for (const VertexId v : vs) out.push_back(g.name(v));
  return out;
}

json vertex_map(const Graph& g, const std::vector<double>& values) {
  json out = json::object();
  for (VertexId v = 0; v < g.vertex_count(); ++v) out[g.name(v)] = values[v];
  return out;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("not a number list: '" + text + "'");
    }
  }
  if (out.empty()) throw UsageError("empty number list");
  return out;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete Hamilton-Jacobi solutions of metastable Markov chains", "dhj"};
  app.require_subcommand(1);
  app.fallthrough();

  Context ctx;
  std::optional<double> tolerance;
  std::string format = "json";
  std::optional<std::size_t> max_size;
  app.add_option("--tolerance", tolerance, "Absolute tolerance for equality tests")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--max-size", max_size, "Largest |V| for exhaustive arborescence enumeration");

  std::string graph_path;
  auto with_graph = [&](CLI::App* sub) {
    sub->add_option("graph", graph_path, "Graph JSON file ('-' for stdin)")->required();
    return sub;
  };

  auto* validate_cmd = with_graph(app.add_subcommand("validate", "Check strong connectivity and the zero-edge assumption"));
  auto* distances_cmd = with_graph(app.add_subcommand("distances", "All-pairs quasimetric"));
  auto* zero_map_cmd = with_graph(app.add_subcommand("zero-map", "Zero map, its cycles and basins"));

  std::string root_name;
  bool enumerate = false;
  auto* arb_cmd = with_graph(app.add_subcommand("arborescences", "Arborescences toward a root"));
  arb_cmd->add_option("--root", root_name, "Root vertex")->required();
  arb_cmd->add_flag("--enumerate", enumerate, "List all of T_root");

  auto* fw_cmd = with_graph(app.add_subcommand("fw", "Arborescence-based solution FW"));
  auto* meta_fw_cmd = with_graph(app.add_subcommand("meta-fw", "FW through the cycle meta graph"));

  std::size_t cycle_index = 0;
  auto* quasi_cmd = with_graph(app.add_subcommand("quasipotential", "W_C = d(C, .)"));
  quasi_cmd->add_option("--cycle", cycle_index, "Cycle index")->required();

  std::string lambda_text;
  auto* solve_cmd = with_graph(app.add_subcommand("solve", "W_lambda from cycle parameters"));
  solve_cmd->add_option("--lambda", lambda_text, "JSON array of lambda_i")->required();

  std::string potential_path;
  auto* check_cmd = with_graph(app.add_subcommand("check", "Verify a candidate solution"));
  check_cmd->add_option("--potential", potential_path, "Potential JSON file")->required();

  auto* minimal_cmd = with_graph(app.add_subcommand("minimal", "Minimal normalized solution"));

  std::string v0_spec = "zero";
  std::optional<std::size_t> max_steps;
  auto* lo_cmd = with_graph(app.add_subcommand("lax-oleinik", "Iterate the Lax-Oleinik operator"));
  lo_cmd->add_option("--v0", v0_spec, "Initial potential file, or 'zero'");
  lo_cmd->add_option("--max-steps", max_steps, "Iteration budget (default |V|^2)");

  double N = 0.0;
  auto* stationary_cmd = with_graph(app.add_subcommand("stationary", "Finite-N stationary measure"));
  stationary_cmd->add_option("--N", N, "Scale parameter")->required()->check(CLI::PositiveNumber);

  std::string n_list_text;
  auto* viscosity_cmd = with_graph(app.add_subcommand("viscosity", "Convergence of W_N to FW"));
  viscosity_cmd->add_option("--N-list", n_list_text, "Comma-separated N values")->required();

  double lift_N = 0.0;
  auto* lift_cmd = with_graph(app.add_subcommand("lift", "Lifted chain on arborescences"));
  lift_cmd->add_option("--N", lift_N, "Scale parameter")->required()->check(CLI::PositiveNumber);

  auto* reversible_cmd = with_graph(app.add_subcommand("reversible", "Reversible-case formula and checks"));

  std::string ring_path;
  auto* ring_cmd = app.add_subcommand("ring", "Closed-form FW on a ring");
  ring_cmd->add_option("--spec", ring_path, "Ring JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "dhj: " << e.what() << "\n";
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  ctx.command = sub->get_name();

  try {
    if (const char* env = std::getenv("DHJ_TOLERANCE"); env && !tolerance) {
      char* end = nullptr;
      const double v = std::strtod(env, &end);
      if (end == env || *end != '\0' || !(v > 0.0)) throw UsageError("DHJ_TOLERANCE must be a positive number");
      ctx.tol = v;
    }
    if (tolerance) ctx.tol = *tolerance;
    if (max_size) {
      ctx.max_size = *max_size;
      ctx.max_size_given = true;
    }
    ctx.csv = format == "csv";
    if (ctx.csv && sub != distances_cmd && sub != viscosity_cmd && sub != stationary_cmd)
      throw UsageError("--format csv is only available for distances, viscosity and stationary");
  } catch (const UsageError& e) {
    err << "dhj: " << e.what() << "\n";
    return 2;
  }

  Outcome result;
  try {
    if (sub == ring_cmd) {
      const RingSpec rs = ring_from_json(ctx.load_json(ring_path));
      const Graph g = ring_graph(rs);
      result.payload = {{"potential", to_json(g, ring_fw(rs, ctx.tol))}, {"graph", to_json(g)}};
    } else {
      const Graph g = ctx.load_graph(graph_path);

      if (sub == validate_cmd) {
        const ValidationReport report = validate(g, ctx.tol);
        if (!report.ok()) {
          const auto code = !report.strongly_connected ? ErrorCode::not_strongly_connected
                                                       : ErrorCode::assumption_violated;
          throw Error(code, report.violations.empty() ? "invalid graph" : report.violations.front(),
                      {{"report", to_json(g, report)}});
        }
        result.payload = to_json(g, report);
      } else if (sub == distances_cmd) {
        const Quasimetric q = all_pairs_distances(g);
        result.payload = {{"distances", to_json(g, q)}};
        std::ostringstream csv;
        csv << "from";
        for (VertexId y = 0; y < g.vertex_count(); ++y) csv << ',' << g.name(y);
        csv << '\n';
        for (VertexId x = 0; x < g.vertex_count(); ++x) {
          csv << g.name(x);
          for (VertexId y = 0; y < g.vertex_count(); ++y) csv << ',' << format_number(q.dist(x, y));
          csv << '\n';
        }
        result.csv = csv.str();
      } else if (sub == zero_map_cmd) {
        const Analysis a = analyze(g, ctx.tol);
        result.payload = to_json(g, a.zs);
      } else if (sub == arb_cmd) {
        require_valid(g, ctx.tol);
        const VertexId root = g.index_of(root_name);
        result.payload = {{"root", g.name(root)}, {"minimum", to_json(g, min_arborescence(g, root))}};
        if (enumerate) {
          json all = json::array();
          for (const auto& a : enumerate_arborescences(g, root, ctx.max_size)) all.push_back(to_json(g, a));
          result.payload["count"] = all.size();
          result.payload["arborescences"] = std::move(all);
        }
      } else if (sub == fw_cmd) {
        require_valid(g, ctx.tol);
        result.payload = {{"potential", to_json(g, fw_solution(g))}};
      } else if (sub == meta_fw_cmd) {
        const Analysis a = analyze(g, ctx.tol);
        const Lambda lambda = meta_fw(g, a.q, a.zs);
        const Graph meta = meta_graph(a.q, a.zs);
        result.payload = {{"lambda", lambda.values},
                          {"meta_graph", to_json(meta)},
                          {"potential", to_json(g, solution_from_lambda(g, a.q, a.zs, lambda, ctx.tol))}};
      } else if (sub == quasi_cmd) {
        const Analysis a = analyze(g, ctx.tol);
        const Potential w = quasipotential(g, a.q, a.zs, cycle_index);
        result.payload = {{"cycle_index", cycle_index},
                          {"cycle", names_of(g, a.zs.cycles[cycle_index])},
                          {"potential", to_json(g, w)}};
      } else if (sub == solve_cmd) {
        const Analysis a = analyze(g, ctx.tol);
        const json arr = parse_json(lambda_text, "--lambda");
        if (!arr.is_array()) throw Error(ErrorCode::malformed_json, "--lambda must be a JSON array of numbers");
        Lambda lambda;
        for (const auto& v : arr) {
          if (!v.is_number()) throw Error(ErrorCode::malformed_json, "--lambda must be a JSON array of numbers");
          lambda.values.push_back(v.get<double>());
        }
        if (lambda.size() != a.zs.cycle_count())
          throw Error(ErrorCode::invalid_argument, "--lambda needs one value per cycle",
                      {{"expected", a.zs.cycle_count()}, {"given", lambda.size()}});
        result.payload = {{"lambda", lambda.values},
                          {"potential", to_json(g, solution_from_lambda(g, a.q, a.zs, lambda, ctx.tol))}};
      } else if (sub == check_cmd) {
        const Analysis a = analyze(g, ctx.tol);
        const Potential w = potential_from_json(g, ctx.load_json(potential_path));
        result.payload = to_json(g, check_solution(g, a.q, a.zs, w, ctx.tol));
        result.payload["residual"] = vertex_map(g, hj_residual(g, w));
      } else if (sub == minimal_cmd) {
        const Analysis a = analyze(g, ctx.tol);
        result.payload = {{"potential", to_json(g, minimal_solution(g, a.q, a.zs))}};
      } else if (sub == lo_cmd) {
        const Potential v0 = v0_spec == "zero" ? Potential(g.vertex_count(), 0.0)
                                               : potential_from_json(g, ctx.load_json(v0_spec));
        const std::size_t budget = max_steps.value_or(g.vertex_count() * g.vertex_count());
        const FixedPointResult r = iterate_to_fixed_point(g, v0, budget, ctx.tol);
        if (!r.converged) ctx.diagnostics.push_back("no fixed point within " + std::to_string(budget) + " steps");
        result.payload = {{"potential", to_json(g, r.potential)}, {"steps", r.steps}, {"converged", r.converged}};
      } else if (sub == stationary_cmd) {
        const StationaryResult r = stationary_measure(g, N);
        result.payload = {{"N", N}, {"pi", vertex_map(g, r.pi)}, {"residual", r.residual}};
        std::ostringstream csv;
        csv << "vertex,pi\n";
        for (VertexId v = 0; v < g.vertex_count(); ++v) csv << g.name(v) << ',' << format_number(r.pi[v]) << '\n';
        result.csv = csv.str();
      } else if (sub == viscosity_cmd) {
        std::vector<double> n_list;
        try {
          n_list = parse_number_list(n_list_text);
        } catch (const UsageError& e) {
          throw Error(ErrorCode::invalid_argument, e.what());
        }
        require_valid(g, ctx.tol);
        const auto rows = viscosity_sweep(g, n_list, ctx.max_size);
        json rows_json = json::array(), errors = json::array();
        std::ostringstream csv;
        csv << "N,error,envelope,method\n";
        for (const auto& row : rows) {
          rows_json.push_back({{"N", row.N},
                               {"error", row.error},
                               {"envelope", row.envelope ? json(*row.envelope) : json(nullptr)},
                               {"method", std::string(method_name(row.method))},
                               {"w_normalized", vertex_map(g, row.w_normalized)}});
          errors.push_back(row.error);
          if (row.method == MeasureMethod::matrix_tree)
            ctx.diagnostics.push_back("N=" + format_number(row.N) + ": rates underflow, used Matrix Tree");
          csv << format_number(row.N) << ',' << format_number(row.error) << ','
              << (row.envelope ? format_number(*row.envelope) : std::string()) << ','
              << method_name(row.method) << '\n';
        }
        result.payload = {{"rows", std::move(rows_json)}, {"errors", std::move(errors)}};
        result.csv = csv.str();
      } else if (sub == lift_cmd) {
        require_valid(g, ctx.tol);
        const LiftedChain chain = build_lifted_chain(g, lift_N, ctx.max_size_given ? ctx.max_size : kLiftCap);
        const auto mt = matrix_tree_measure(g, lift_N, ctx.max_size_given ? ctx.max_size : kLiftCap);
        result.payload = {{"N", lift_N},
                          {"nodes", chain.nodes.size()},
                          {"transitions", chain.transitions.size()},
                          {"eulerian", chain.eulerian()},
                          {"strongly_connected", chain.strongly_connected},
                          {"stationarity_residual", chain.stationarity_residual},
                          {"projected_marginal", vertex_map(g, chain.projected_marginal)},
                          {"matrix_tree_measure", vertex_map(g, mt)},
                          {"total_variation", total_variation(chain.projected_marginal, mt)}};
      } else if (sub == reversible_cmd) {
        const ReversibleData rd = gradient_condition(g, ctx.tol);
        json gradient = {{"is_gradient", rd.is_gradient},
                         {"base_vertex", g.name(rd.base_vertex)},
                         {"max_cycle_defect", rd.max_cycle_defect}};
        const Potential fw = reversible_fw(g, rd);
        const ReversibleStructureReport s = reversible_structure_checks(g, rd, ctx.tol, ctx.max_size);
        result.payload = {{"gradient", std::move(gradient)},
                          {"potential", to_json(g, fw)},
                          {"checks",
                           {{"cycles_have_length_two", s.cycles_have_length_two},
                            {"skeleton_is_reversed_zero_map", s.skeleton_is_reversed_zero_map},
                            {"bijection_holds", s.bijection_holds},
                            {"weight_identity_holds", s.weight_identity_holds},
                            {"minimizers_share_support", s.minimizers_share_support},
                            {"pairs_checked", s.pairs_checked},
                            {"matched_arborescences", s.matched_arborescences},
                            {"max_weight_defect", s.max_weight_defect},
                            {"all_pass", s.all_pass()}}}};
      }
    }
  } catch (const UsageError& e) {
    err << "dhj: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    out << envelope(ctx, {{"error", error_json(e)}}).dump(2) << "\n";
    return 1;
  }

  if (ctx.csv) {
    out << *result.csv;
  } else {
    out << envelope(ctx, std::move(result.payload)).dump(2) << "\n";
  }
  return 0;
}

}  // namespace dhj::cli
