// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "helpers.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/named.hpp"

using namespace qg;

namespace {

Hypergraph random_graph(int n, std::mt19937_64& rng) {
  Hypergraph g(n);
  std::bernoulli_distribution coin(0.5);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (coin(rng)) g.toggle_edge({u, v});
    }
  }
  return g;
}

PauliSum polynomial(const std::vector<std::pair<double, std::string>>& terms) {
  const int n = static_cast<int>(terms.front().second.size());
  PauliSum s(n);
  for (const auto& [c, p] : terms) s.add(PauliString::parse(p), c);
  return s;
}

// Oracle: Z projection by explicit projector, renormalized, over the other
// qubits in ascending order.
QubitState brute_project(const QubitState& psi, int v, int outcome) {
  const int n = psi.num_qubits();
  Vec out = Vec::Zero(Eigen::Index{1} << (n - 1));
  for (Eigen::Index i = 0; i < psi.amplitudes().size(); ++i) {
    const int bit = static_cast<int>((i >> (n - 1 - v)) & 1);
    if (bit != outcome) continue;
    const Eigen::Index hi = i >> (n - v);
    const Eigen::Index lo = i & ((Eigen::Index{1} << (n - 1 - v)) - 1);
    out((hi << (n - 1 - v)) | lo) = psi[i];
  }
  return QubitState(n - 1, out);
}

}  // namespace

TEST_CASE("single edge gives |0+> + |1->") {
  auto s = build_state(Hypergraph(2, {{0, 1}}));
  const double h = 0.5;
  CHECK(std::abs(s[0] - h) < 1e-12);
  CHECK(std::abs(s[1] - h) < 1e-12);
  CHECK(std::abs(s[2] - h) < 1e-12);
  CHECK(std::abs(s[3] + h) < 1e-12);
}

TEST_CASE("three-vertex hyperedge flips only |111>") {
  auto s = build_state(Hypergraph(3, {{0, 1, 2}}));
  const double a = 1 / std::sqrt(8.0);
  for (int i = 0; i < 7; ++i) CHECK(std::abs(s[i] - a) < 1e-12);
  CHECK(std::abs(s[7] + a) < 1e-12);
}

TEST_CASE("star4 is H2 H3 H4 on GHZ4") {
  auto psi = ghz_state(4);
  for (int q = 1; q < 4; ++q) psi = apply_unitary(psi, gates::H(), {q});
  CHECK(fidelity(psi, build_state(star_graph(4))) == doctest::Approx(1).epsilon(1e-12));
}

TEST_CASE("graph JSON round trip is 1-based") {
  auto j = nlohmann::json::parse(R"({"n": 3, "edges": [[1, 2], [3, 2, 1]]})");
  auto g = Hypergraph::from_json(j);
  CHECK(g.has_edge({0, 1}));
  CHECK(g.has_edge({0, 1, 2}));
  CHECK(Hypergraph::from_json(g.to_json()) == g);
  CHECK_THROWS_AS(Hypergraph::from_json(nlohmann::json::parse(R"({"n": 2, "edges": [[1, 3]]})")), Error);
  CHECK_THROWS_AS(Hypergraph(3, {{0, 1}, {1, 0}}), Error);
  CHECK_THROWS_AS(Hypergraph(3, {{0}}), Error);
}

TEST_CASE("star4 generators") {
  auto gens = graph_generators(star_graph(4));
  REQUIRE(gens.size() == 4);
  CHECK(gens[0].to_string() == "XZZZ");
  CHECK(gens[1].to_string() == "ZXII");
  CHECK(gens[2].to_string() == "ZIXI");
  CHECK(gens[3].to_string() == "ZIIX");
}

TEST_CASE("B7 generators match the graph") {
  auto gens = graph_generators(*named_recipe("B7").target);
  CHECK(gens[0].to_string() == "XIZZIII");
  CHECK(gens[2].to_string() == "ZZXIZZZ");
  CHECK(gens[6].to_string() == "IIZZIIX");
}

TEST_CASE("hypergraph generators stabilize and reduce to Pauli strings on graphs") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = random_graph(5, rng);
    auto sums = stabilizer_generators(g);
    auto strings = graph_generators(g);
    for (std::size_t v = 0; v < sums.size(); ++v) {
      REQUIRE(sums[v].is_single_pauli());
      CHECK(sums[v].to_string() == PauliSum(strings[v]).to_string());
    }
  }
  Hypergraph toffoli(3, {{0, 1, 2}});
  auto gens = stabilizer_generators(toffoli);
  auto psi = build_state(toffoli);
  for (const auto& k : gens) CHECK(std::abs(expectation(psi, k) - 1.0) < 1e-9);
  auto ref = polynomial({{0.5, "IIX"}, {0.5, "IZX"}, {0.5, "ZIX"}, {-0.5, "ZZX"}});
  CHECK(gens[2].to_string() == ref.to_string());
  // Product of all three generators.
  auto all = polynomial({{0.5, "XXX"}, {0.5, "XYY"}, {0.5, "YXY"}, {0.5, "YYX"}});
  auto k123 = gens[0] * gens[1] * gens[2];
  k123.prune();
  CHECK(k123.to_string() == all.to_string());
}

TEST_CASE("stabilizer group elements have expectation one") {
  std::mt19937_64 rng(5);
  for (int n = 1; n <= 7; ++n) {
    auto g = random_graph(n, rng);
    auto psi = build_state(g);
    for (const auto& p : stabilizer_group(g)) CHECK(pauli_expectation(psi, p) == doctest::Approx(1).epsilon(1e-9));
  }
  auto g = random_graph(8, rng);
  auto psi = build_state(g);
  auto gens = graph_generators(g);
  std::uniform_int_distribution<std::uint64_t> pick(0, 255);
  for (int k = 0; k < 64; ++k) {
    const auto mask = pick(rng);
    PauliString p(8);
    for (int v = 0; v < 8; ++v) {
      if ((mask >> v) & 1U) p = p * gens[static_cast<std::size_t>(v)];
    }
    CHECK(pauli_expectation(psi, p) == doctest::Approx(1).epsilon(1e-9));
  }
}

TEST_CASE("local complementation") {
  auto star = star_graph(4);
  CHECK(local_complement(local_complement(star, 0), 0) == star);
  CHECK(local_complement(star, 0) == complete_graph(4));
  CHECK_THROWS_AS(local_complement(Hypergraph(3, {{0, 1, 2}}), 0), Error);

  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> size(2, 7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = size(rng);
    auto g = random_graph(n, rng);
    const int v = std::uniform_int_distribution<int>(0, n - 1)(rng);
    auto lhs = apply_gates(build_state(g), lc_unitary(g, v));
    auto rhs = build_state(local_complement(g, v));
    CHECK(fidelity(lhs, rhs) == doctest::Approx(1).epsilon(1e-9));
  }
}

TEST_CASE("toggle_cz matches a CZ gate") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = random_graph(5, rng);
    auto psi = apply_unitary(build_state(g), gates::CZ(), {1, 3});
    auto t = toggle_cz(g, 1, 3);
    CHECK((psi.amplitudes() - build_state(t).amplitudes()).norm() < 1e-12);
    CHECK(toggle_cz(t, 1, 3) == g);
  }
  CHECK_THROWS_AS(toggle_cz(Hypergraph(2), 1, 1), Error);
}

TEST_CASE("Z measurement rule matches brute force on all small graphs") {
  for (int n = 2; n <= 5; ++n) {
    const int pairs = n * (n - 1) / 2;
    for (int code = 0; code < (1 << pairs); ++code) {
      Hypergraph g(n);
      int bit = 0;
      for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v, ++bit) {
          if ((code >> bit) & 1) g.toggle_edge({u, v});
        }
      }
      auto psi = build_state(g);
      for (int v = 0; v < n; ++v) {
        for (int outcome = 0; outcome < 2; ++outcome) {
          auto r = z_measure_vertex(psi, g, v, outcome);
          CHECK(r.probability == doctest::Approx(0.5).epsilon(1e-12));
          auto expect = brute_project(psi, v, outcome);
          REQUIRE(fidelity(r.post, expect) == doctest::Approx(1).epsilon(1e-9));
          auto rebuilt = build_state(r.residual);
          for (int u : r.z_byproducts) rebuilt = apply_unitary(rebuilt, gates::Z(), {u});
          REQUIRE(fidelity(rebuilt, expect) == doctest::Approx(1).epsilon(1e-9));
          if (outcome == 0) CHECK(r.residual == g.remove_vertex(v));
          if (outcome == 1) {
            std::vector<int> nb;
            for (int u : g.neighbors(v)) nb.push_back(u < v ? u : u - 1);
            CHECK(r.z_byproducts == nb);
          }
        }
      }
    }
  }
}

TEST_CASE("Z measurement on hyperedges toggles reduced edges") {
  Hypergraph h(4, {{0, 1, 2}, {2, 3}});
  auto psi = build_state(h);
  auto r = z_measure_vertex(psi, h, 2, 1);
  CHECK(r.residual == Hypergraph(3, {{0, 1}}));
  CHECK(r.z_byproducts == std::vector<int>{2});
  REQUIRE(r.toggled.size() == 1);
  auto rebuilt = apply_unitary(build_state(r.residual), gates::Z(), {2});
  CHECK(fidelity(rebuilt, r.post) == doctest::Approx(1).epsilon(1e-9));
  CHECK_THROWS_AS(z_measure_vertex(psi, h, 7, 0), Error);
}

TEST_CASE("every named recipe reproduces its target") {
  for (const auto& name : named_state_names()) {
    CAPTURE(name);
    auto r = named_recipe(name);
    auto psi = run_recipe(r);
    if (r.target) CHECK(fidelity(psi, build_state(*r.target)) == doctest::Approx(1).epsilon(1e-9));
  }
  CHECK_THROWS_AS(named_recipe("nonsense"), Error);
}

TEST_CASE("named target graphs") {
  CHECK(*named_recipe("L5").target == line_graph(5));
  CHECK(*named_recipe("L4").target == line_graph(4));
  CHECK(*named_recipe("L3").target == line_graph(3));
  CHECK(*named_recipe("box4").target == Hypergraph(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}}));
  CHECK(*named_recipe("toffoli").target == Hypergraph(3, {{0, 1, 2}}));
  CHECK(*named_recipe("fc_toffoli").target == Hypergraph(3, {{0, 1, 2}, {0, 1}, {0, 2}, {1, 2}}));
  CHECK(*named_recipe("bisep").target == Hypergraph(4, {{0, 1}, {2, 3}}));
  CHECK(*named_recipe("bisep_swapped").target == Hypergraph(4, {{0, 3}, {1, 2}}));
  // Two hubs joined to every other vertex.
  auto b7 = *named_recipe("B7").target;
  for (int v : {0, 1, 4, 5, 6}) {
    CHECK(b7.neighbors(v) == std::vector<int>{2, 3});
  }
}

TEST_CASE("published stabilizer lists hold on recipe states") {
  for (const auto& t : fixtures::pauli_tables()) {
    CAPTURE(t.state);
    auto psi = named_state(t.state);
    for (const auto& p : t.paulis) {
      CAPTURE(p);
      CHECK(pauli_expectation(psi, PauliString::parse(p)) == doctest::Approx(1).epsilon(1e-9));
    }
  }
  for (const auto& t : fixtures::unsigned_tables()) {
    CAPTURE(t.state);
    auto psi = named_state(t.state);
    for (const auto& p : t.paulis) {
      CAPTURE(p);
      CHECK(std::abs(pauli_expectation(psi, PauliString::parse(p))) == doctest::Approx(1).epsilon(1e-9));
    }
  }
  auto swapped = named_state("bisep_swapped");
  for (const auto& p : fixtures::pauli_tables().back().paulis) {
    CAPTURE(p);
    CHECK(pauli_expectation(swapped, PauliString::parse(fixtures::swap_pairs(p))) == doctest::Approx(1).epsilon(1e-9));
  }
  for (const auto& t : fixtures::polynomial_tables()) {
    CAPTURE(t.state);
    auto psi = named_state(t.state);
    for (const auto& op : t.operators) CHECK(std::abs(expectation(psi, polynomial(op)) - 1.0) < 1e-9);
  }
}

TEST_CASE("clover center measurement") {
  auto clover = named_recipe("clover");
  auto psi = run_recipe(clover);
  auto g = *clover.target;
  auto gens = stabilizer_generators(g);
  for (const auto& k : gens) CHECK(std::abs(expectation(psi, k) - 1.0) < 1e-9);

  auto zero = z_measure_vertex(psi, g, 4, 0);
  CHECK(fidelity(zero.post, build_state(Hypergraph(4, {{0, 1}, {2, 3}}))) == doctest::Approx(1).epsilon(1e-9));
  auto one = z_measure_vertex(psi, g, 4, 1);
  CHECK(one.z_byproducts.empty());
  CHECK(fidelity(one.post, build_state(Hypergraph(4, {{0, 3}, {1, 2}}))) == doctest::Approx(1).epsilon(1e-9));
}

TEST_CASE("clover outer measurements give the Toffoli family") {
  auto clover = named_recipe("clover");
  auto psi = run_recipe(clover);
  auto g = *clover.target;
  // Clover vertices: petals (0,1) and (2,3), centre 4.
  auto a = z_measure_vertex(psi, g, 0, 0);
  auto b = z_measure_vertex(a.post, a.residual, 2, 0);
  CHECK(fidelity(b.post, build_state(Hypergraph(3, {{0, 1, 2}}))) == doctest::Approx(1).epsilon(1e-9));

  auto c = z_measure_vertex(psi, g, 0, 1);
  QubitState s = c.post;
  for (int u : c.z_byproducts) s = apply_unitary(s, gates::Z(), {u});
  auto d = z_measure_vertex(s, c.residual, 0, 1);
  s = d.post;
  for (int u : d.z_byproducts) s = apply_unitary(s, gates::Z(), {u});
  CHECK(d.residual == Hypergraph(3, {{0, 1, 2}, {0, 1}, {0, 2}, {1, 2}}));
  CHECK(fidelity(s, build_state(d.residual)) == doctest::Approx(1).epsilon(1e-9));
}
