#include <doctest.h>

#include <cmath>
#include <map>

#include "doeblin/bayes_net.hpp"
#include "doeblin/coefficients.hpp"
#include "doeblin/error.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace doeblin;
using nlohmann::json;

namespace {

BayesNet parse(const char* text) { return BayesNet::from_json(json::parse(text)); }

const char* kChain = R"({"source": "X", "nodes": [
  {"name": "X", "alphabet": 2, "parents": []},
  {"name": "U1", "alphabet": 2, "parents": ["X"], "cpt": [[0.75, 0.25], [0.25, 0.75]]},
  {"name": "U2", "alphabet": 2, "parents": ["U1"], "cpt": [[0.75, 0.25], [0.25, 0.75]]}]})";

const char* kDiamond = R"({"source": "X", "nodes": [
  {"name": "X", "alphabet": 2, "parents": []},
  {"name": "A", "alphabet": 2, "parents": ["X"], "cpt": [[0.75, 0.25], [0.25, 0.75]]},
  {"name": "B", "alphabet": 2, "parents": ["X"], "cpt": [[0.75, 0.25], [0.25, 0.75]]},
  {"name": "C", "alphabet": 2, "parents": ["A", "B"],
   "cpt": [[0.75, 0.25], [0.25, 0.75], [0.25, 0.75], [0.75, 0.25]]}]})";

// X -> U1 -> V and X -> V
const char* kTriangle = R"({"source": "X", "nodes": [
  {"name": "X", "alphabet": 2, "parents": []},
  {"name": "U1", "alphabet": 2, "parents": ["X"], "cpt": [[0.75, 0.25], [0.25, 0.75]]},
  {"name": "V", "alphabet": 2, "parents": ["X", "U1"],
   "cpt": [[0.75, 0.25], [0.25, 0.75], [0.75, 0.25], [0.25, 0.75]]}]})";

std::vector<std::size_t> ids(const BayesNet& net, std::initializer_list<const char*> names) {
  std::vector<std::size_t> v;
  for (const char* n : names) v.push_back(net.index_of(n));
  return node_set(v);
}

std::vector<std::size_t> random_target(testgen::Gen& g, const BayesNet& net) {
  std::vector<std::size_t> v;
  for (std::size_t u = 1; u < net.size(); ++u)
    if (g.coin(0.35)) v.push_back(u);
  if (v.empty()) v.push_back(g.index(1, net.size() - 1));
  return node_set(v);
}

}  // namespace

TEST_SUITE("network parsing") {
  TEST_CASE("reorders nodes topologically") {
    const auto net = parse(R"({"source": "X", "nodes": [
      {"name": "B", "alphabet": 2, "parents": ["A"], "cpt": [[1, 0], [0, 1]]},
      {"name": "A", "alphabet": 2, "parents": ["X"], "cpt": [[1, 0], [0, 1]]},
      {"name": "X", "alphabet": 2, "parents": []}]})");
    CHECK(net.node(0).name == "X");
    CHECK(net.node(1).name == "A");
    CHECK(net.node(2).name == "B");
    CHECK(net.source() == 0);
  }

  TEST_CASE("rejects cycles, unknown parents, bad rows, misplaced CPTs") {
    CHECK_THROWS_AS(parse(R"({"source": "X", "nodes": [
      {"name": "X", "alphabet": 2, "parents": []},
      {"name": "A", "alphabet": 2, "parents": ["B"], "cpt": [[1, 0], [0, 1]]},
      {"name": "B", "alphabet": 2, "parents": ["A"], "cpt": [[1, 0], [0, 1]]}]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse(R"({"source": "X", "nodes": [
      {"name": "X", "alphabet": 2, "parents": []},
      {"name": "A", "alphabet": 2, "parents": ["Q"], "cpt": [[1, 0], [0, 1]]}]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse(R"({"source": "X", "nodes": [
      {"name": "X", "alphabet": 2, "parents": []},
      {"name": "A", "alphabet": 2, "parents": ["X"], "cpt": [[0.6, 0.6], [0, 1]]}]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse(R"({"source": "X", "nodes": [
      {"name": "X", "alphabet": 2, "parents": []},
      {"name": "A", "alphabet": 2, "parents": ["X"], "cpt": [[1, 0]]}]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse(R"({"source": "X", "nodes": [
      {"name": "X", "alphabet": 2, "parents": [], "cpt": [[0.5, 0.5]]}]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse(R"({"source": "X", "nodes": [
      {"name": "X", "alphabet": 2, "parents": []},
      {"name": "A", "alphabet": 2, "parents": ["X"]}]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse(R"({"source": "Z", "nodes": [{"name": "X", "alphabet": 2, "parents": []}]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse(R"({"source": "X", "nodes": [
      {"name": "X", "alphabet": 2, "parents": []},
      {"name": "X", "alphabet": 2, "parents": []}]})"),
                    ValidationError);
  }
}

TEST_SUITE("node coefficients and composite channels") {
  TEST_CASE("node_tau worked values") {
    const auto net = parse(R"({"source": "X", "nodes": [
      {"name": "X", "alphabet": 2, "parents": []},
      {"name": "C", "alphabet": 2, "parents": ["X"], "cpt": [[0.3, 0.7], [0.3, 0.7]]},
      {"name": "B", "alphabet": 2, "parents": ["X"], "cpt": [[0.75, 0.25], [0.25, 0.75]]},
      {"name": "D", "alphabet": 2, "parents": ["X"], "cpt": [[1, 0], [0, 1]]}]})");
    CHECK(node_tau(net, net.index_of("C")) == doctest::Approx(1.0));
    CHECK(node_tau(net, net.index_of("B")) == doctest::Approx(0.5));
    CHECK(node_tau(net, net.index_of("D")) == 0.0);
    CHECK_THROWS_AS(node_tau(net, net.source()), ValidationError);
  }

  TEST_CASE("source alone is the identity; chain composes BSCs") {
    const auto net = parse(kChain);
    const Channel id = composite_channel(net, {net.source()});
    CHECK(max_abs_diff(id.data(), Channel::identity(2).data()) == 0.0);
    const Channel u2 = composite_channel(net, ids(net, {"U2"}));
    CHECK(max_abs_diff(u2.data(), Channel::bsc(0.375).data()) < 1e-15);
  }

  TEST_CASE("property: composite channel equals full-joint enumeration") {
    testgen::Gen g(51);
    for (int it = 0; it < 100; ++it) {
      const auto net = g.net();
      const auto v = random_target(g, net);
      const Channel c = composite_channel(net, v);
      const auto o = oracle::brute_composite(net, v);
      double err = 0;
      for (std::size_t x = 0; x < o.size(); ++x)
        for (std::size_t j = 0; j < o[x].size(); ++j) err = std::max(err, std::abs(c(x, j) - o[x][j]));
      CHECK(err < 1e-13);
    }
  }

  TEST_CASE("enumeration cap") {
    const auto net = parse(kDiamond);
    CHECK_THROWS_AS(composite_channel(net, ids(net, {"C"}), 4), CapExceededError);
  }
}

TEST_SUITE("contraction bounds: worked values") {
  TEST_CASE("percolation on the chain is tight") {
    const auto net = parse(kChain);
    const auto v = ids(net, {"U2"});
    CHECK(percolation_exact(net, v).probability == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(1 - doeblin_coef(composite_channel(net, v)) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(percolation_exact(net, {net.source()}).probability == 1.0);
  }

  TEST_CASE("recursion bound on the chain is tight") {
    // 0.5 * tau(U1) + 0.5 * tau(U1 with pa(U2) = U1) = 0.25 + 0.25
    const auto net = parse(kChain);
    const double b = recursion_bound(net, ids(net, {"U1"}), net.index_of("U2"));
    CHECK(b == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(doeblin_coef(composite_channel(net, ids(net, {"U1", "U2"}))) == doctest::Approx(0.5).epsilon(1e-15));
  }

  TEST_CASE("recursion bound with a constant CPT reduces to the first term") {
    const auto net = parse(R"({"source": "X", "nodes": [
      {"name": "X", "alphabet": 2, "parents": []},
      {"name": "A", "alphabet": 2, "parents": ["X"], "cpt": [[0.75, 0.25], [0.25, 0.75]]},
      {"name": "K", "alphabet": 3, "parents": ["X"], "cpt": [[0.2, 0.3, 0.5], [0.2, 0.3, 0.5]]}]})");
    const auto v = ids(net, {"A"});
    CHECK(recursion_bound(net, v, net.index_of("K")) == doctest::Approx(doeblin_coef(composite_channel(net, v))));
  }

  TEST_CASE("recursion bound preconditions") {
    const auto net = parse(kChain);
    CHECK_THROWS_AS(recursion_bound(net, ids(net, {"U2"}), net.index_of("U1")), ValidationError);
    CHECK_THROWS_AS(recursion_bound(net, ids(net, {"U1"}), net.source()), ValidationError);
    CHECK_THROWS_AS(recursion_bound(net, ids(net, {"U1"}), net.index_of("U1")), ValidationError);
  }

  TEST_CASE("shortcut-free paths: single edge, diamond, triangle") {
    const auto edge = parse(R"({"source": "X", "nodes": [
      {"name": "X", "alphabet": 2, "parents": []},
      {"name": "U", "alphabet": 2, "parents": ["X"], "cpt": [[0.9, 0.1], [0.3, 0.7]]}]})");
    const auto e = shortcut_free_bound(edge, ids(edge, {"U"}));
    CHECK(e.bound == doctest::Approx(1 - node_tau(edge, 1)).epsilon(1e-15));

    const auto d = parse(kDiamond);
    const auto pd = shortcut_free_bound(d, ids(d, {"C"}));
    CHECK(pd.bound == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(pd.paths.size() == 2);

    const auto t = parse(kTriangle);
    const auto pt = shortcut_free_bound(t, ids(t, {"V"}));
    CHECK(pt.bound == doctest::Approx(0.5).epsilon(1e-15));
    REQUIRE(pt.paths.size() == 1);
    CHECK(pt.paths[0].size() == 2);

    const auto c = parse(kChain);
    CHECK(shortcut_free_bound(c, {c.source()}).bound == 1.0);
  }

  TEST_CASE("Monte Carlo percolation is reproducible and thread-count invariant") {
    const auto net = parse(kDiamond);
    const auto v = ids(net, {"C"});
    const auto a = percolation_mc(net, v, 20000, 5, Exec::Parallel);
    const auto b = percolation_mc(net, v, 20000, 5, Exec::Serial);
    CHECK(a.probability == b.probability);
    CHECK(a.monte_carlo);
    CHECK(a.samples == 20000);
    CHECK(percolation_mc(net, v, 20000, 6).probability != a.probability);
  }
}

TEST_SUITE("contraction bounds: properties") {
  TEST_CASE("property: bound ordering on random nets") {
    testgen::Gen g(52);
    for (int it = 0; it < 150; ++it) {
      const auto net = g.net();
      const auto v = random_target(g, net);
      const double gap = 1 - doeblin_coef(composite_channel(net, v));
      const double perc = percolation_exact(net, v).probability;
      const double sf = shortcut_free_bound(net, v).bound;
      CHECK(gap <= perc + 1e-9);
      CHECK(perc <= sf + 1e-9);
    }
  }

  TEST_CASE("property: exact percolation equals two independent oracles") {
    testgen::Gen g(53);
    for (int it = 0; it < 150; ++it) {
      const auto net = g.net();
      const auto v = random_target(g, net);
      const double perc = percolation_exact(net, v).probability;
      std::size_t mask = 0;
      for (std::size_t u : v) mask |= std::size_t{1} << u;
      std::map<std::size_t, double> memo;
      CHECK(std::abs(perc - oracle::percolation_all_states(net, v)) < 1e-12);
      CHECK(std::abs(perc - oracle::percolation_recursive(net, mask, memo)) < 1e-12);
    }
  }

  TEST_CASE("property: shortcut-free bound equals the literal subset filter") {
    testgen::Gen g(54);
    for (int it = 0; it < 150; ++it) {
      const auto net = g.net(7, 2);
      const auto v = random_target(g, net);
      std::size_t kept = 0;
      const double lit = oracle::shortcut_free_literal(net, v, &kept);
      const auto pb = shortcut_free_bound(net, v);
      CHECK(std::abs(pb.bound - lit) < 1e-12);
      CHECK(pb.paths.size() == kept);
    }
  }

  TEST_CASE("property: recursion bound is below the joint coefficient") {
    testgen::Gen g(55);
    int done = 0;
    while (done < 150) {
      const auto net = g.net();
      const auto v = random_target(g, net);
      // u outside V with no directed path into V
      const auto anc = net.ancestors_of(v);
      std::vector<std::size_t> cand;
      for (std::size_t u = 0; u < net.size(); ++u)
        if (u != net.source() && !anc[u]) cand.push_back(u);
      if (cand.empty()) continue;
      ++done;
      const std::size_t u = cand[g.index(0, cand.size() - 1)];
      auto vu = v;
      vu.push_back(u);
      CHECK(doeblin_coef(composite_channel(net, node_set(vu))) >= recursion_bound(net, v, u) - 1e-9);
    }
  }

  TEST_CASE("property: Monte Carlo within four standard errors of exact") {
    testgen::Gen g(56);
    int outside = 0;
    for (int it = 0; it < 20; ++it) {
      const auto net = g.net();
      const auto v = random_target(g, net);
      const double exact = percolation_exact(net, v).probability;
      const auto mc = percolation_mc(net, v, 100000, 1000 + it);
      const double tol = 4 * mc.std_error + 1e-12;
      outside += std::abs(mc.probability - exact) > tol;
    }
    CHECK(outside == 0);
  }
}

TEST_SUITE("product-channel bound") {
  TEST_CASE("independent U gives one; bijective U gives tau^n") {
    const Channel indep = Channel::constant(3, Pmf({0.1, 0.2, 0.3, 0.4}));
    CHECK(samorodnitsky_bound(indep, {2, 2}, {0.3, 0.6}) == doctest::Approx(1.0).epsilon(1e-14));
    const Channel bij = Channel::identity(4);
    CHECK(samorodnitsky_bound(bij, {2, 2}, {0.4, 0.4}) == doctest::Approx(0.16).epsilon(1e-14));
  }

  TEST_CASE("marginal letters") {
    // columns (x0, x1) row-major: 00 01 10 11
    const Channel c({{0.1, 0.2, 0.3, 0.4}});
    const Channel m0 = marginal_letters(c, {2, 2}, {0});
    CHECK(m0(0, 0) == doctest::Approx(0.3));
    const Channel m1 = marginal_letters(c, {2, 2}, {1});
    CHECK(m1(0, 0) == doctest::Approx(0.4));
  }

  TEST_CASE("property: sandwich between the product bound and tau of the output") {
    testgen::Gen g(57);
    for (int it = 0; it < 200; ++it) {
      const std::size_t n = g.index(2, 3);
      std::vector<std::size_t> alph(n);
      std::size_t cols = 1;
      for (auto& a : alph) cols *= (a = g.index(2, 3));
      const Channel prior = g.channel(g.index(2, 4), cols);
      std::vector<Channel> letters;
      std::vector<double> taus;
      for (std::size_t j = 0; j < n; ++j) {
        letters.push_back(g.channel(alph[j], g.index(2, 3)));
        taus.push_back(doeblin_coef(letters.back()));
      }
      Channel mem = letters[0];
      for (std::size_t j = 1; j < n; ++j) mem = tensor(mem, letters[j]);
      const double out_tau = doeblin_coef(compose(prior, mem));
      const double b = samorodnitsky_bound(prior, alph, taus);
      double prod = 1;
      for (double t : taus) prod *= t;
      CHECK(b <= out_tau + 1e-9);
      CHECK(b >= prod - 1e-9);
    }
  }
}
