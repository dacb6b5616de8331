// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0

#include "qgraph/graph.hpp"

#include <algorithm>
#include <cmath>

namespace qg {

// ---------------------------------------------------------------- Hypergraph

Hypergraph::Hypergraph(int n) : n_(n) {
  if (n < 0) throw Error("negative vertex count");
}

Hypergraph::Hypergraph(int n, const std::vector<Edge>& edges) : Hypergraph(n) {
  for (const auto& e : edges) {
    auto c = canonical(e);
    if (!edges_.insert(c).second) throw Error("duplicate edge");
  }
}

Edge Hypergraph::canonical(Edge e) const {
  std::sort(e.begin(), e.end());
  if (e.size() < 2) throw Error("edges need at least two vertices");
  if (std::adjacent_find(e.begin(), e.end()) != e.end()) throw Error("edge repeats a vertex");
  if (e.front() < 0 || e.back() >= n_) throw Error("edge vertex out of range");
  return e;
}

Hypergraph Hypergraph::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("edges")) {
    throw Error("graph JSON needs fields \"n\" and \"edges\"");
  }
  const int n = j.at("n").get<int>();
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    Edge edge;
    for (const auto& v : e) edge.push_back(v.get<int>() - 1);
    edges.push_back(edge);
  }
  return Hypergraph(n, edges);
}

nlohmann::json Hypergraph::to_json() const {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : edges_) {
    nlohmann::json one = nlohmann::json::array();
    for (int v : e) one.push_back(v + 1);
    edges.push_back(one);
  }
  return {{"n", n_}, {"edges", edges}};
}

bool Hypergraph::is_graph() const {
  return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.size() == 2; });
}

bool Hypergraph::has_edge(const Edge& e) const { return edges_.count(canonical(e)) > 0; }

void Hypergraph::toggle_edge(Edge e) {
  auto c = canonical(std::move(e));
  if (!edges_.erase(c)) edges_.insert(c);
}

std::vector<int> Hypergraph::neighbors(int v) const {
  std::vector<int> out;
  for (const auto& e : edges_) {
    if (e.size() != 2) continue;
    if (e[0] == v) out.push_back(e[1]);
    if (e[1] == v) out.push_back(e[0]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Hypergraph Hypergraph::remove_vertex(int v) const {
  if (v < 0 || v >= n_) throw Error("vertex out of range");
  std::vector<int> order;
  for (int u = 0; u < n_; ++u) {
    if (u != v) order.push_back(u);
  }
  return induced(order);
}

Hypergraph Hypergraph::induced(const std::vector<int>& order) const {
  std::vector<int> where(static_cast<std::size_t>(n_), -1);
  for (std::size_t k = 0; k < order.size(); ++k) where[static_cast<std::size_t>(order[k])] = static_cast<int>(k);
  Hypergraph out(static_cast<int>(order.size()));
  for (const auto& e : edges_) {
    Edge m;
    for (int u : e) {
      if (where[static_cast<std::size_t>(u)] < 0) break;
      m.push_back(where[static_cast<std::size_t>(u)]);
    }
    if (m.size() == e.size()) out.toggle_edge(m);
  }
  return out;
}

bool Hypergraph::is_connected() const {
  if (n_ == 0) return false;
  std::vector<bool> seen(static_cast<std::size_t>(n_), false);
  std::vector<int> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (const auto& e : edges_) {
      if (std::find(e.begin(), e.end(), v) == e.end()) continue;
      for (int u : e) {
        if (!seen[static_cast<std::size_t>(u)]) {
          seen[static_cast<std::size_t>(u)] = true;
          stack.push_back(u);
        }
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

// ------------------------------------------------------------------- states

QubitState build_state(const Hypergraph& h) {
  const int n = h.num_vertices();
  if (n > kMaxQubits) throw Error("hypergraph too large for the dense engine");
  std::vector<std::uint64_t> masks;
  for (const auto& e : h.edges()) {
    std::uint64_t m = 0;
    for (int v : e) m |= std::uint64_t{1} << (n - 1 - v);
    masks.push_back(m);
  }
  const auto dim = std::uint64_t{1} << n;
  Vec amps(static_cast<Eigen::Index>(dim));
  for (std::uint64_t c = 0; c < dim; ++c) {
    int flips = 0;
    for (auto m : masks) flips += ((c & m) == m);
    amps(static_cast<Eigen::Index>(c)) = (flips % 2) ? -1.0 : 1.0;
  }
  return QubitState(n, amps);
}

PauliSum controlled_z_polynomial(int n, const std::vector<int>& support) {
  // prod (I - Z_u)/2 expanded term by term.
  PauliSum proj = PauliSum::identity(n);
  for (int u : support) {
    PauliSum f(n);
    f.add(PauliString(n), 0.5);
    f.add(PauliString::single(n, u, PauliString::Z), -0.5);
    proj = proj * f;
  }
  PauliSum out = PauliSum::identity(n) + proj * cplx(-2.0);
  out.prune();
  return out;
}

std::vector<PauliSum> stabilizer_generators(const Hypergraph& h) {
  const int n = h.num_vertices();
  std::vector<PauliSum> gens;
  for (int v = 0; v < n; ++v) {
    PauliSum k(PauliString::single(n, v, PauliString::X));
    for (const auto& e : h.edges()) {
      if (std::find(e.begin(), e.end(), v) == e.end()) continue;
      std::vector<int> rest;
      for (int u : e) {
        if (u != v) rest.push_back(u);
      }
      k = k * controlled_z_polynomial(n, rest);
    }
    gens.push_back(k);
  }
  return gens;
}

std::vector<PauliString> graph_generators(const Hypergraph& g) {
  if (!g.is_graph()) throw Error("Pauli generators need a plain graph");
  const int n = g.num_vertices();
  std::vector<PauliString> gens;
  for (int v = 0; v < n; ++v) {
    PauliString k = PauliString::single(n, v, PauliString::X);
    for (int u : g.neighbors(v)) k.set(u, PauliString::Z);
    gens.push_back(k);
  }
  return gens;
}

std::vector<PauliString> stabilizer_group(const Hypergraph& g) {
  const auto gens = graph_generators(g);
  const int n = g.num_vertices();
  std::vector<PauliString> group;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    PauliString p(n);
    for (int v = 0; v < n; ++v) {
      if ((mask >> v) & 1U) p = p * gens[static_cast<std::size_t>(v)];
    }
    group.push_back(p);
  }
  return group;
}

PauliSum stabilizer_element(const std::vector<PauliSum>& gens, std::uint64_t mask) {
  if (gens.empty()) throw Error("no generators");
  PauliSum p = PauliSum::identity(gens[0].size());
  for (std::size_t v = 0; v < gens.size(); ++v) {
    if ((mask >> v) & 1U) p = p * gens[v];
  }
  return p;
}

// ----------------------------------------------------------------------- LC

Hypergraph local_complement(const Hypergraph& g, int v) {
  if (!g.is_graph()) throw Error("local complementation needs a plain graph");
  if (v < 0 || v >= g.num_vertices()) throw Error("vertex out of range");
  Hypergraph out = g;
  const auto nb = g.neighbors(v);
  for (std::size_t i = 0; i < nb.size(); ++i) {
    for (std::size_t j = i + 1; j < nb.size(); ++j) out.toggle_edge({nb[i], nb[j]});
  }
  return out;
}

std::vector<LocalGate> lc_unitary(const Hypergraph& g, int v) {
  if (!g.is_graph()) throw Error("local complementation needs a plain graph");
  if (v < 0 || v >= g.num_vertices()) throw Error("vertex out of range");
  std::vector<LocalGate> out{{gates::sqrt_minus_iX(), {v}}};
  for (int u : g.neighbors(v)) out.push_back({gates::sqrt_iZ(), {u}});
  return out;
}

QubitState apply_gates(QubitState psi, const std::vector<LocalGate>& gates) {
  for (const auto& g : gates) psi = apply_unitary(psi, g.gate, g.qubits);
  return psi;
}

Hypergraph toggle_cz(const Hypergraph& h, int u, int v) {
  if (u == v) throw Error("CZ needs two distinct vertices");
  Hypergraph out = h;
  out.toggle_edge({u, v});
  return out;
}

// ------------------------------------------------------------ Z measurement

ZMeasureResult z_measure_vertex(const QubitState& psi, const Hypergraph& h, int v, int outcome) {
  const int n = h.num_vertices();
  if (psi.num_qubits() != n) throw Error("state and hypergraph sizes differ");
  if (v < 0 || v >= n) throw Error("vertex out of range");
  if (outcome != 0 && outcome != 1) throw Error("Z outcome must be 0 or 1");

  auto m = measure_projective(psi, pauli_basis('Z'), {v}, outcome);
  ZMeasureResult r;
  r.probability = m.probability;
  r.post = m.post;
  for (int u = 0; u < n; ++u) {
    if (u != v) r.kept.push_back(u);
  }
  r.residual = h.induced(r.kept);
  if (outcome == 1) {
    std::vector<int> zparity(static_cast<std::size_t>(n - 1), 0);
    for (const auto& e : h.edges()) {
      if (std::find(e.begin(), e.end(), v) == e.end()) continue;
      Edge rest;
      for (int u : e) {
        if (u != v) rest.push_back(u < v ? u : u - 1);
      }
      if (rest.size() == 1) {
        zparity[static_cast<std::size_t>(rest[0])] ^= 1;
      } else {
        r.residual.toggle_edge(rest);
        r.toggled.push_back(rest);
      }
    }
    for (int u = 0; u < n - 1; ++u) {
      if (zparity[static_cast<std::size_t>(u)]) r.z_byproducts.push_back(u);
    }
  }
  return r;
}

}  // namespace qg
