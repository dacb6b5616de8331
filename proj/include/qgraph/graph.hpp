// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0
//
// Graph and hypergraph states. Vertices are 0-based in the API and 1-based in
// the JSON file format {"n": int, "edges": [[int, ...], ...]}.

#pragma once

#include <set>
#include <vector>

#include "json.hpp"
#include "qgraph/pauli.hpp"
#include "qgraph/state.hpp"

namespace qg {

using Edge = std::vector<int>;  // sorted, size >= 2

class Hypergraph {
 public:
  Hypergraph() = default;
  explicit Hypergraph(int n);
  Hypergraph(int n, const std::vector<Edge>& edges);

  static Hypergraph from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  int num_vertices() const { return n_; }
  const std::set<Edge>& edges() const { return edges_; }
  bool is_graph() const;
  bool has_edge(const Edge& e) const;
  // Adds the edge when absent and removes it when present.
  void toggle_edge(Edge e);
  // Vertices sharing a two-element edge with v.
  std::vector<int> neighbors(int v) const;
  // Drops v and every edge through it; higher vertices shift down by one.
  Hypergraph remove_vertex(int v) const;
  // Result vertex k is old vertex order[k]; edges leaving `order` are dropped.
  Hypergraph induced(const std::vector<int>& order) const;
  bool is_connected() const;

  bool operator==(const Hypergraph& other) const = default;

 private:
  Edge canonical(Edge e) const;
  int n_ = 0;
  std::set<Edge> edges_;
};

// prod_e C^{|e|}Z |+>^n
QubitState build_state(const Hypergraph& h);

// K_v = X_v prod_{e containing v} C^{e minus v}Z as Pauli polynomials. For a
// plain graph each sum is the single string X_v Z_{N(v)}.
std::vector<PauliSum> stabilizer_generators(const Hypergraph& h);
std::vector<PauliString> graph_generators(const Hypergraph& g);
// All 2^n products of the graph generators, identity first.
std::vector<PauliString> stabilizer_group(const Hypergraph& g);
// Products of hypergraph generators selected by the bits of mask.
PauliSum stabilizer_element(const std::vector<PauliSum>& gens, std::uint64_t mask);

// C^S Z = I - 2 prod_{u in S} (I - Z_u)/2 as a Pauli polynomial.
PauliSum controlled_z_polynomial(int n, const std::vector<int>& support);

struct LocalGate {
  Mat gate;
  std::vector<int> qubits;
};

Hypergraph local_complement(const Hypergraph& g, int v);
// sqrt(-iX_v) prod_{u in N(v)} sqrt(iZ_u); maps build_state(g) to
// build_state(local_complement(g, v)) up to a global phase.
std::vector<LocalGate> lc_unitary(const Hypergraph& g, int v);
QubitState apply_gates(QubitState psi, const std::vector<LocalGate>& gates);

Hypergraph toggle_cz(const Hypergraph& h, int u, int v);

struct ZMeasureResult {
  double probability = 0.0;
  QubitState post;               // over the kept vertices
  Hypergraph residual;           // over the kept vertices, renumbered
  std::vector<int> kept;         // kept[i] = original index of residual vertex i
  std::vector<int> z_byproducts; // residual vertices carrying a Z correction
  // Generalized-CZ edges toggled into `residual` by outcome 1.
  std::vector<Edge> toggled;
};

// Measures vertex v in Z with the given outcome. Byproducts are reported, not
// applied: post == prod_{u in z_byproducts} Z_u build_state(residual), up to a
// global phase.
ZMeasureResult z_measure_vertex(const QubitState& psi, const Hypergraph& h, int v, int outcome);

}  // namespace qg
