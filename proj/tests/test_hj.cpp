#include <doctest.h>

#include <cmath>

#include "dhj/arborescence.hpp"
#include "dhj/hj.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace dhj;
using namespace dhj::testing;

namespace {

struct Setup {
  Graph g;
  Quasimetric q;
  ZeroStructure zs;
};

Setup setup(Graph g) {
  Quasimetric q = all_pairs_distances(g);
  ZeroStructure zs = zero_structure(g, q);
  return {std::move(g), std::move(q), std::move(zs)};
}

std::vector<EdgeId> sorted_edges(const Graph& g, std::initializer_list<std::pair<const char*, const char*>> list) {
  std::vector<EdgeId> out;
  for (const auto& [a, b] : list) out.push_back(edge_id(g, a, b));
  std::sort(out.begin(), out.end());
  return out;
}

bool lipschitz(const Setup& s, const Potential& w, double tol) {
  for (VertexId x = 0; x < s.g.vertex_count(); ++x)
    for (VertexId y = 0; y < s.g.vertex_count(); ++y)
      if (w[x] - w[y] > s.q.dist(y, x) + tol) return false;
  return true;
}

}  // namespace

TEST_CASE("residuals on the fixtures") {
  const Graph g4 = fixture("g4");
  for (const double r : hj_residual(g4, pot({1, 1, 0, 0}))) CHECK(r == 0.0);
  for (const double r : hj_residual(g4, pot({0, 0, 0, 0}))) CHECK(r == 0.0);
  const auto rev = hj_residual(fixture("rev3"), pot({0, 0, 0}));
  CHECK(rev[0] == 0.0);
  CHECK(rev[1] == 0.0);
  CHECK(rev[2] == -1.0);
  CHECK_THROWS_AS(hj_residual(g4, pot({0, 0, 0})), Error);
}

TEST_CASE("FW on G4 is a solution on the maximal face") {
  const Setup s = setup(fixture("g4"));
  const SolutionReport r = check_solution(s.g, s.q, s.zs, pot({1, 1, 0, 0}));
  CHECK(r.is_subsolution);
  CHECK(r.is_supersolution);
  CHECK(r.is_solution);
  CHECK(r.skeleton == sorted_edges(s.g, {{"1", "2"}, {"2", "1"}, {"3", "4"}, {"4", "3"}}));
  REQUIRE(r.lambda);
  CHECK(r.lambda->values == std::vector<double>{1, 0});
  CHECK(r.face == Face::maximal);
  CHECK(r.decomposition_valid);
  CHECK(face_name(r.face) == "maximal");
}

TEST_CASE("a potential that is not constant on a cycle violates the subsolution inequality") {
  const Setup s = setup(fixture("g4"));
  const SolutionReport r = check_solution(s.g, s.q, s.zs, pot({3, 0, 0, 0}));
  CHECK_FALSE(r.is_subsolution);
  CHECK_FALSE(r.is_solution);
  CHECK_FALSE(r.lambda);
  // W(1) - W(2) = 3 exceeds delta(2, 1) = 0, and W(1) - W(4) = 3 exceeds delta(4, 1) = 2.
  REQUIRE(r.violations.size() == 2);
  CHECK(r.violations[0].edge == edge_id(s.g, "2", "1"));
  CHECK(r.violations[0].excess == 3.0);
  CHECK(r.violations[1].edge == edge_id(s.g, "4", "1"));
  CHECK(r.violations[1].excess == 1.0);
  CHECK(r.face == Face::other);
}

TEST_CASE("Rev3 solution and skeleton") {
  const Setup s = setup(fixture("rev3"));
  const SolutionReport r = check_solution(s.g, s.q, s.zs, pot({0, 0, 1}));
  CHECK(r.is_solution);
  CHECK(r.skeleton == sorted_edges(s.g, {{"2", "1"}, {"1", "2"}, {"2", "3"}}));
  CHECK(r.witness_edge[2] == edge_id(s.g, "2", "3"));
  CHECK(r.face == Face::maximal);

  const SolutionReport zero = check_solution(s.g, s.q, s.zs, pot({0, 0, 0}));
  CHECK(zero.is_subsolution);
  CHECK_FALSE(zero.is_supersolution);
  CHECK_FALSE(zero.witness_edge[2].has_value());
  CHECK(zero.face == Face::minimal);
}

TEST_CASE("quasipotentials") {
  const Setup g4 = setup(fixture("g4"));
  CHECK(quasipotential(g4.g, g4.q, g4.zs, 0) == pot({0, 0, 1, 1}));
  CHECK(quasipotential(g4.g, g4.q, g4.zs, 1) == pot({2, 2, 0, 0}));
  CHECK_THROWS_AS(quasipotential(g4.g, g4.q, g4.zs, 2), Error);
  const Setup r4 = setup(fixture("r4"));
  const Potential w = quasipotential(r4.g, r4.q, r4.zs, 1);
  CHECK(max_norm_distance(w, pot({0.7, 0.7, 0, 0})) < 1e-15);
}

TEST_CASE("W_lambda on G4") {
  const Setup s = setup(fixture("g4"));
  CHECK(solution_from_lambda(s.g, s.q, s.zs, Lambda{{1, 0}}) == pot({1, 1, 0, 0}));
  CHECK(solution_from_lambda(s.g, s.q, s.zs, Lambda{{0, 0}}) == pot({0, 0, 0, 0}));
  CHECK(lambda_feasible(s.q, s.zs, Lambda{{2, 0}}));
  CHECK_FALSE(lambda_feasible(s.q, s.zs, Lambda{{3, 0}}));
  CHECK_FALSE(lambda_feasible(s.q, s.zs, Lambda{{0, 1.5}}));
  try {
    solution_from_lambda(s.g, s.q, s.zs, Lambda{{3, 0}});
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::infeasible_lambda);
    CHECK(e.context()["i"] == 0);
    CHECK(e.context()["j"] == 1);
    CHECK(e.context()["distance"] == 2.0);
    CHECK(e.context()["slack"] == -1.0);
  }
  CHECK_THROWS_AS(solution_from_lambda(s.g, s.q, s.zs, Lambda{{0}}), Error);
}

TEST_CASE("lambda read from solutions") {
  const Setup g4 = setup(fixture("g4"));
  CHECK(lambda_from_solution(g4.g, g4.zs, pot({1, 1, 0, 0})).values == std::vector<double>{1, 0});
  CHECK(lambda_from_solution(g4.g, g4.zs, pot({0, 0, 0, 0})).values == std::vector<double>{0, 0});
  const Setup g2 = setup(fixture("g2"));
  CHECK(lambda_from_solution(g2.g, g2.zs, pot({0, 0})).values == std::vector<double>{0});
  try {
    lambda_from_solution(g4.g, g4.zs, pot({3, 0, 0, 0}));
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_constant_on_cycle);
  }
}

TEST_CASE("minimal solutions") {
  const Setup g4 = setup(fixture("g4"));
  CHECK(minimal_solution(g4.g, g4.q, g4.zs) == pot({0, 0, 0, 0}));
  const Setup rev3 = setup(fixture("rev3"));
  CHECK(minimal_solution(rev3.g, rev3.q, rev3.zs) == pot({0, 0, 1}));
  const Setup g3c = setup(fixture("g3c"));
  CHECK(minimal_solution(g3c.g, g3c.q, g3c.zs) == pot({0, 0, 0}));
}

TEST_CASE("FW through the meta graph") {
  const Setup g4 = setup(fixture("g4"));
  const Graph meta = meta_graph(g4.q, g4.zs);
  CHECK(meta.names() == std::vector<std::string>{"C0", "C1"});
  CHECK(meta.edge(*meta.find_edge(0, 1)).delta == 1.0);
  CHECK(meta.edge(*meta.find_edge(1, 0)).delta == 2.0);
  CHECK(min_arborescence(meta, 0).weight_sum == 2.0);
  CHECK(min_arborescence(meta, 1).weight_sum == 1.0);
  CHECK(meta_fw(g4.g, g4.q, g4.zs).values == std::vector<double>{1, 0});

  const Setup g2 = setup(fixture("g2"));
  CHECK(meta_fw(g2.g, g2.q, g2.zs).values == std::vector<double>{0});

  const Setup r4 = setup(fixture("r4"));
  const Lambda star = meta_fw(r4.g, r4.q, r4.zs);
  CHECK(star[0] == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(star[1] == 0.0);
}

TEST_CASE("polyhedron dimension on the fixtures") {
  CHECK(lip1_dimension(setup(fixture("g4")).zs) == 2);
  CHECK(lip1_dimension(setup(fixture("rev3")).zs) == 2);
  CHECK(lip1_dimension(setup(fixture("g3c")).zs) == 1);
}

TEST_CASE("random graphs: FW equals W_lambda at the meta FW") {
  Rng rng(51);
  for (int trial = 0; trial < 150; ++trial) {
    const Setup s = setup(random_graph(rng, rng.index(2, 7)));
    const Potential via_meta = solution_from_lambda(s.g, s.q, s.zs, meta_fw(s.g, s.q, s.zs));
    CHECK(via_meta == fw_solution(s.g));
  }
}

TEST_CASE("random graphs: W_lambda, pointwise minima and the minimal solution solve the equation") {
  Rng rng(52);
  for (int trial = 0; trial < 150; ++trial) {
    const Setup s = setup(random_graph(rng, rng.index(2, 7)));
    const Lambda a = random_feasible_lambda(rng, s.q, s.zs);
    const Lambda b = random_feasible_lambda(rng, s.q, s.zs);
    REQUIRE(lambda_feasible(s.q, s.zs, a));
    const Potential wa = solution_from_lambda(s.g, s.q, s.zs, a);
    const Potential wb = solution_from_lambda(s.g, s.q, s.zs, b);
    for (const Potential& w : {wa, pointwise_min(wa, wb), minimal_solution(s.g, s.q, s.zs), fw_solution(s.g)}) {
      const SolutionReport r = check_solution(s.g, s.q, s.zs, w);
      CHECK(r.is_solution);
      CHECK(r.is_solution == (r.is_subsolution && r.is_supersolution));
      CHECK(r.decomposition_valid);
      CHECK(r.face == Face::maximal);
      for (const auto& e : r.witness_edge) CHECK(e.has_value());
      for (const double v : hj_residual(s.g, w)) CHECK(std::abs(v) <= 1e-9);
    }
    const Lambda back = lambda_from_solution(s.g, s.zs, wa);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(back[i] == doctest::Approx(a[i]).epsilon(1e-12));
  }
}

TEST_CASE("random potentials: the edge test agrees with the 1-Lipschitz test") {
  Rng rng(53);
  int agree_true = 0, agree_false = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Setup s = setup(random_graph(rng, rng.index(2, 7)));
    const Potential w = trial % 2 == 0 ? random_lipschitz(rng, s.q) : random_potential(rng, s.g.vertex_count(), 0.5);
    const bool edge_test = check_solution(s.g, s.q, s.zs, w).is_subsolution;
    CHECK(edge_test == lipschitz(s, w, 1e-9));
    (edge_test ? agree_true : agree_false)++;
  }
  CHECK(agree_true > 50);
  CHECK(agree_false > 50);
}

TEST_CASE("random graphs: the maximal face matches an exhaustive family search") {
  Rng rng(54);
  int maximal = 0, not_maximal = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Setup s = setup(random_graph(rng, rng.index(2, 7)));
    Potential w;
    switch (trial % 3) {
      case 0: w = solution_from_lambda(s.g, s.q, s.zs, random_feasible_lambda(rng, s.q, s.zs)); break;
      case 1: w = random_lipschitz(rng, s.q); break;
      default: {
        // Subsolution flat on each basin, typically without a skeleton edge somewhere.
        const Lambda l = random_feasible_lambda(rng, s.q, s.zs);
        w = Potential(s.g.vertex_count(), 0.0);
        for (VertexId v = 0; v < s.g.vertex_count(); ++v) w[v] = l[s.zs.basin_of[v]];
      }
    }
    const SolutionReport r = check_solution(s.g, s.q, s.zs, w);
    if (!r.is_subsolution) continue;
    const bool brute = brute_geodetic_family_exists(s.g, s.q, s.zs, w, 1e-9);
    CHECK((r.face == Face::maximal) == brute);
    if (r.face == Face::maximal) {
      ++maximal;
      for (VertexId x = 0; x < s.g.vertex_count(); ++x) {
        const std::size_t i = r.family_component[x];
        CHECK(std::abs(w[x] - w[s.zs.cycles[i].front()] - s.q.dist(s.zs.cycles[i].front(), x)) <= 1e-9);
      }
    } else {
      ++not_maximal;
    }
    if (r.face == Face::minimal) {
      for (VertexId v = 0; v < s.g.vertex_count(); ++v)
        CHECK(std::abs(w[v] - (*r.lambda)[s.zs.basin_of[v]]) <= 1e-9);
    }
  }
  CHECK(maximal > 20);
  CHECK(not_maximal > 20);
}

TEST_CASE("random graphs: affine dimensions of the polyhedron and of the solution parameters") {
  Rng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    const Setup s = setup(random_graph(rng, rng.index(2, 7)));
    const std::size_t n = s.g.vertex_count();
    std::vector<std::vector<double>> cloud, lambdas;
    for (std::size_t k = 0; k < 3 * n + 3; ++k) {
      // Inf-convolution of a random function with d lands in the polyhedron.
      std::vector<double> f(n);
      for (auto& v : f) v = rng.uniform(0.0, 1.0);
      std::vector<double> w(n, kInfinity);
      for (VertexId x = 0; x < n; ++x)
        for (VertexId z = 0; z < n; ++z) w[x] = std::min(w[x], f[z] + s.q.dist(z, x));
      CHECK(lipschitz(s, Potential(w), 1e-12));
      cloud.push_back(w);

      Lambda l = random_feasible_lambda(rng, s.q, s.zs);
      const Potential sol = solution_from_lambda(s.g, s.q, s.zs, l);
      lambdas.push_back(lambda_from_solution(s.g, s.zs, sol).values);
    }
    CHECK(affine_rank(cloud) == lip1_dimension(s.zs));
    CHECK(affine_rank(lambdas) == s.zs.cycle_count());
  }
}

TEST_CASE("small random graphs: every grid solution is some W_lambda above the minimal solution") {
  Rng rng(56);
  for (int trial = 0; trial < 40; ++trial) {
    const Setup s = setup(random_graph(rng, rng.index(2, 4)));
    const std::size_t n = s.g.vertex_count();
    const Potential minimal = minimal_solution(s.g, s.q, s.zs);
    double top = 0.0;
    for (VertexId x = 0; x < n; ++x)
      for (VertexId y = 0; y < n; ++y) top = std::max(top, s.q.dist(x, y));
    const std::size_t steps = static_cast<std::size_t>(top / 0.25) + 2;
    std::vector<std::size_t> digit(n, 0);
    digit[0] = 0;
    bool found_minimal = false;
    std::size_t solutions = 0;
    while (true) {
      Potential w(n, 0.0);
      for (VertexId x = 0; x < n; ++x) w[x] = 0.25 * static_cast<double>(digit[x]);
      bool solves = min_value(w) == 0.0;
      if (solves) {
        for (const double r : hj_residual(s.g, w)) solves = solves && std::abs(r) <= 1e-12;
      }
      if (solves) {
        ++solutions;
        for (VertexId x = 0; x < n; ++x) CHECK(w[x] >= minimal[x]);
        const Lambda l = lambda_from_solution(s.g, s.zs, w);
        CHECK(lambda_feasible(s.q, s.zs, l));
        CHECK(solution_from_lambda(s.g, s.q, s.zs, l) == w);
        if (w == minimal) found_minimal = true;
      }
      std::size_t k = 0;
      while (k < n && ++digit[k] == steps) digit[k++] = 0;
      if (k == n) break;
    }
    CHECK(found_minimal);
    CHECK(solutions >= 1);
  }
}
