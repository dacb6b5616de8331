// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0
//
// Named resource states and the device recipes that produce them. Recipes act
// on the eight chip qubits; qubit 2k and 2k+1 (0-based) share qudit k, with
// qudits A, B, C, D holding qubits (0,1), (2,3), (4,5), (6,7).

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qgraph/graph.hpp"

namespace qg {

struct RecipeStep {
  enum class Kind { Unitary, ZProject };
  Kind kind = Kind::Unitary;
  Mat gate;                 // Unitary only
  std::vector<int> qubits;  // original chip labels
  int outcome = 0;          // ZProject only
  std::string label;        // human-readable, e.g. "LC(3)" or "H2"
};

struct Recipe {
  std::string name;
  std::string seed;  // "ghz4", "ghz8" or "4p4d"
  std::vector<RecipeStep> steps;
  // Surviving chip qubits in the order of the target's vertices.
  std::vector<int> order;
  std::optional<Hypergraph> target;
  std::string description;  // one line, for reports
};

// (|0...0> + |1...1>)/sqrt2
QubitState ghz_state(int n);
// The eight-term four-photon four-dimensional state on qudits A..D, as eight
// qubits.
QubitState four_p_four_d_state();
QubitState seed_state(const std::string& seed);

// Replays the recipe from its seed and returns the state on `order`.
QubitState run_recipe(const Recipe& r);

std::vector<std::string> named_state_names();
// Throws on an unknown name.
Recipe named_recipe(const std::string& name);
QubitState named_state(const std::string& name);

// Generic families over n vertices (0-based), for tests and the explorer.
Hypergraph star_graph(int n);
Hypergraph line_graph(int n);
Hypergraph complete_graph(int n);

}  // namespace qg
