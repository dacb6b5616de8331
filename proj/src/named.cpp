// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0

#include "qgraph/named.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <functional>

namespace qg {

namespace {

std::string lbl(int q) { return std::to_string(q + 1); }

// Records gates while tracking the (hyper)graph they produce. Vertices keep
// their chip labels; projected vertices become isolated.
class Builder {
 public:
  Builder(std::string name, std::string seed, int n) : graph_(n), pending_z_(static_cast<std::size_t>(n), 0) {
    r_.name = std::move(name);
    r_.seed = std::move(seed);
  }

  void set_graph(Hypergraph g) { graph_ = std::move(g); }
  const Hypergraph& graph() const { return graph_; }

  void gate(const Mat& g, std::vector<int> qubits, std::string label) {
    r_.steps.push_back({RecipeStep::Kind::Unitary, g, std::move(qubits), 0, std::move(label)});
  }

  void h(int q) { gate(gates::H(), {q}, "H" + lbl(q)); }

  void cz(int u, int v) {
    gate(gates::CZ(), {u, v}, "CZ" + lbl(u) + lbl(v));
    graph_.toggle_edge({u, v});
  }

  void lc(int v) {
    for (auto& g : lc_unitary(graph_, v)) gate(g.gate, g.qubits, "LC(" + lbl(v) + ")");
    graph_ = local_complement(graph_, v);
  }

  void zproject(int v, int outcome = 0) {
    r_.steps.push_back({RecipeStep::Kind::ZProject, Mat(), {v}, outcome,
                        "Z" + lbl(v) + "->" + std::to_string(outcome)});
    pending_z_[static_cast<std::size_t>(v)] = 0;
    Hypergraph next(graph_.num_vertices());
    for (const auto& e : graph_.edges()) {
      if (std::find(e.begin(), e.end(), v) == e.end()) {
        next.toggle_edge(e);
        continue;
      }
      if (outcome == 0) continue;
      Edge rest;
      for (int u : e) {
        if (u != v) rest.push_back(u);
      }
      if (rest.size() == 1) {
        pending_z_[static_cast<std::size_t>(rest[0])] ^= 1;
      } else {
        next.toggle_edge(rest);
      }
    }
    graph_ = next;
  }

  // Applies the outstanding Z byproducts from outcome-1 projections.
  void correct_byproducts() {
    for (std::size_t q = 0; q < pending_z_.size(); ++q) {
      if (pending_z_[q]) gate(gates::Z(), {static_cast<int>(q)}, "Z" + lbl(static_cast<int>(q)));
      pending_z_[q] = 0;
    }
  }

  Recipe finish(std::vector<int> order, bool with_target, std::string description) {
    r_.order = std::move(order);
    if (with_target) r_.target = graph_.induced(r_.order);
    r_.description = std::move(description);
    return r_;
  }

 private:
  Recipe r_;
  Hypergraph graph_;
  std::vector<int> pending_z_;
};

void star8_prefix(Builder& b) {
  for (int q = 1; q < 8; ++q) b.h(q);
  b.set_graph(star_graph(8));
}

void line5_prefix(Builder& b) {
  star8_prefix(b);
  b.cz(2, 3);
  b.cz(6, 7);
  b.lc(2);
  b.lc(6);
  for (int q : {1, 4, 5}) b.zproject(q);
}

void branched8_prefix(Builder& b) {
  star8_prefix(b);
  b.cz(2, 3);
  b.lc(0);
  b.lc(2);
}

// Local unitaries that turn the 4P4D state into an eight-qubit hypergraph
// state. Each product is applied right to left.
void hypergraph_prefix(Builder& b) {
  b.gate(gates::CX(), {0, 1}, "CX12");
  b.gate(gates::RZ(-kPi / 4), {1}, "RZ2(-pi/4)");
  b.gate(gates::Z(), {0}, "Z1");
  b.h(1);
  b.h(0);
  b.gate(gates::CX(), {2, 3}, "CX34");
  b.gate(gates::RZ(-kPi / 2), {3}, "RZ4(-pi/2)");
  b.gate(gates::RZ(kPi / 2), {2}, "RZ3(pi/2)");
  b.h(3);
  b.gate(gates::CZ(), {4, 5}, "CZ56");
  b.gate(gates::CX(), {4, 5}, "CX56");
  b.gate(gates::RZ(kPi / 2), {5}, "RZ6(pi/2)");
  b.gate(gates::RZ(kPi / 4), {4}, "RZ5(pi/4)");
  b.gate(gates::Z(), {4}, "Z5");
  b.gate(gates::CX(), {6, 7}, "CX78");
  b.gate(gates::RZ(-kPi / 4), {7}, "RZ8(-pi/4)");
  b.h(7);
  b.h(6);
  // Chip labels, 0-based.
  b.set_graph(Hypergraph(8, {{5, 7}, {4, 6}, {4, 5, 6}, {3, 5}, {2, 5, 6}, {1, 5}, {0, 4, 5}, {0, 2}, {0, 2, 5}}));
}

void clover_prefix(Builder& b) {
  hypergraph_prefix(b);
  for (int q : {1, 3, 7}) b.zproject(q);
}

using Factory = std::function<Recipe()>;

const std::map<std::string, Factory>& registry() {
  static const std::map<std::string, Factory> kRegistry = {
      {"ghz8",
       [] {
         Builder b("ghz8", "ghz8", 8);
         return b.finish({0, 1, 2, 3, 4, 5, 6, 7}, false, "fused eight-qubit GHZ state");
       }},
      {"star4",
       [] {
         Builder b("star4", "ghz4", 4);
         for (int q = 1; q < 4; ++q) b.h(q);
         b.set_graph(star_graph(4));
         return b.finish({0, 1, 2, 3}, true, "H2 H3 H4 on the two-qudit GHZ state");
       }},
      {"star8",
       [] {
         Builder b("star8", "ghz8", 8);
         star8_prefix(b);
         return b.finish({0, 1, 2, 3, 4, 5, 6, 7}, true, "H2..H8 on GHZ8");
       }},
      {"L5",
       [] {
         Builder b("L5", "ghz8", 8);
         line5_prefix(b);
         return b.finish({3, 2, 0, 6, 7}, true, "star8, CZ34, CZ78, LC(3), LC(7), project 2,5,6");
       }},
      {"L4",
       [] {
         Builder b("L4", "ghz8", 8);
         line5_prefix(b);
         b.zproject(7);
         return b.finish({3, 2, 0, 6}, true, "L5, project 8");
       }},
      {"box4",
       [] {
         Builder b("box4", "ghz8", 8);
         line5_prefix(b);
         b.zproject(7);
         b.lc(2);
         b.lc(0);
         b.lc(3);
         return b.finish({3, 2, 0, 6}, true, "L4, LC(3), LC(1), LC(4)");
       }},
      {"L3",
       [] {
         Builder b("L3", "ghz8", 8);
         line5_prefix(b);
         b.zproject(6);
         b.zproject(7);
         return b.finish({3, 2, 0}, true, "L5, project 7,8");
       }},
      {"B8",
       [] {
         Builder b("B8", "ghz8", 8);
         branched8_prefix(b);
         return b.finish({0, 1, 2, 3, 4, 5, 6, 7}, true, "star8, CZ34, LC(1), LC(3)");
       }},
      {"B7",
       [] {
         Builder b("B7", "ghz8", 8);
         branched8_prefix(b);
         b.zproject(7);
         return b.finish({0, 1, 2, 3, 4, 5, 6}, true, "B8, project 8");
       }},
      {"crazy6",
       [] {
         Builder b("crazy6", "ghz8", 8);
         branched8_prefix(b);
         b.zproject(7);
         b.zproject(6);
         return b.finish({0, 1, 2, 3, 4, 5}, true, "B8, project 8,7");
       }},
      {"B5",
       [] {
         Builder b("B5", "ghz8", 8);
         branched8_prefix(b);
         for (int q : {7, 6, 5}) b.zproject(q);
         return b.finish({0, 1, 2, 3, 4}, true, "B8, project 8,7,6");
       }},
      {"B3",
       [] {
         Builder b("B3", "ghz8", 8);
         branched8_prefix(b);
         for (int q : {7, 6, 5, 4, 1}) b.zproject(q);
         return b.finish({0, 2, 3}, true, "B8, project 8,7,6,5,2");
       }},
      {"4p4d",
       [] {
         Builder b("4p4d", "4p4d", 8);
         return b.finish({0, 1, 2, 3, 4, 5, 6, 7}, false, "all eight sources pumped, fused");
       }},
      {"hyper8",
       [] {
         Builder b("hyper8", "4p4d", 8);
         hypergraph_prefix(b);
         return b.finish({0, 1, 2, 3, 4, 5, 6, 7}, true, "4P4D with U_A..U_D");
       }},
      {"clover",
       [] {
         Builder b("clover", "4p4d", 8);
         clover_prefix(b);
         // Petals 1-2 and 3-4, centre last.
         return b.finish({0, 2, 6, 4, 5}, true, "hyper8, project 2,4,8");
       }},
      {"toffoli",
       [] {
         Builder b("toffoli", "4p4d", 8);
         clover_prefix(b);
         b.zproject(0);
         b.zproject(4);
         return b.finish({2, 5, 6}, true, "clover, project 1,5 onto 00");
       }},
      {"fc_toffoli",
       [] {
         Builder b("fc_toffoli", "4p4d", 8);
         clover_prefix(b);
         b.zproject(0, 1);
         b.zproject(2, 1);
         b.correct_byproducts();
         return b.finish({4, 5, 6}, true, "clover, project 1,3 onto 11, Z6 correction");
       }},
      {"bisep",
       [] {
         Builder b("bisep", "4p4d", 8);
         clover_prefix(b);
         b.zproject(5, 0);
         return b.finish({0, 2, 6, 4}, true, "clover, centre onto 0");
       }},
      {"bisep_swapped",
       [] {
         Builder b("bisep_swapped", "4p4d", 8);
         clover_prefix(b);
         b.zproject(5, 1);
         b.correct_byproducts();
         return b.finish({0, 2, 6, 4}, true, "clover, centre onto 1");
       }},
  };
  return kRegistry;
}

}  // namespace

QubitState ghz_state(int n) {
  Vec v = Vec::Zero(Eigen::Index{1} << n);
  v(0) = 1;
  v(v.size() - 1) = 1;
  return QubitState(n, v);
}

QubitState four_p_four_d_state() {
  struct Term {
    int a, b, c, d;
    double phase;
  };
  const Term terms[] = {{0, 0, 0, 0, 0},       {0, 0, 3, 3, -kPi / 4}, {1, 1, 1, 1, kPi / 2},
                        {1, 2, 1, 2, 0},       {2, 1, 2, 1, kPi / 4},  {2, 2, 2, 2, -kPi / 4},
                        {3, 3, 0, 0, kPi / 2}, {3, 3, 3, 3, kPi / 4}};
  Vec v = Vec::Zero(256);
  for (const auto& t : terms) v((t.a << 6) | (t.b << 4) | (t.c << 2) | t.d) = std::exp(kI * t.phase);
  return QubitState(8, v);
}

QubitState seed_state(const std::string& seed) {
  if (seed == "ghz4") return ghz_state(4);
  if (seed == "ghz8") return ghz_state(8);
  if (seed == "4p4d") return four_p_four_d_state();
  throw Error("unknown seed state '" + seed + "'");
}

QubitState run_recipe(const Recipe& r) {
  QubitState psi = seed_state(r.seed);
  std::vector<int> labels;  // register position -> chip label
  for (int q = 0; q < psi.num_qubits(); ++q) labels.push_back(q);
  auto pos = [&](int chip) {
    auto it = std::find(labels.begin(), labels.end(), chip);
    if (it == labels.end()) throw Error("recipe step touches a projected qubit");
    return static_cast<int>(it - labels.begin());
  };
  for (const auto& s : r.steps) {
    if (s.kind == RecipeStep::Kind::Unitary) {
      std::vector<int> t;
      for (int q : s.qubits) t.push_back(pos(q));
      psi = apply_unitary(psi, s.gate, t);
    } else {
      const int p = pos(s.qubits.at(0));
      psi = measure_projective(psi, pauli_basis('Z'), {p}, s.outcome).post;
      labels.erase(labels.begin() + p);
    }
  }
  std::vector<int> order;
  for (int q : r.order) order.push_back(pos(q));
  if (order.size() != labels.size()) throw Error("recipe order does not cover the surviving qubits");
  return permute_qubits(psi, order);
}

std::vector<std::string> named_state_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : registry()) out.push_back(k);
  return out;
}

Recipe named_recipe(const std::string& name) {
  const auto& reg = registry();
  auto it = reg.find(name);
  if (it == reg.end()) throw Error("unknown named state '" + name + "'");
  return it->second();
}

QubitState named_state(const std::string& name) { return run_recipe(named_recipe(name)); }

Hypergraph star_graph(int n) {
  Hypergraph g(n);
  for (int v = 1; v < n; ++v) g.toggle_edge({0, v});
  return g;
}

Hypergraph line_graph(int n) {
  Hypergraph g(n);
  for (int v = 0; v + 1 < n; ++v) g.toggle_edge({v, v + 1});
  return g;
}

Hypergraph complete_graph(int n) {
  Hypergraph g(n);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) g.toggle_edge({u, v});
  }
  return g;
}

}  // namespace qg
