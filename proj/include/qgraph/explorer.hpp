// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0
//
// Graph states reachable from a seed under local complementation, CZ toggles
// on fixed vertex pairs and Z-basis vertex deletion, grouped into classes of
// graphs equivalent under local complementation and relabelling.
//
// Graphs here are simple (no hyperedges) with at most 8 vertices.

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qgraph/graph.hpp"

namespace qg {

inline constexpr int kMaxExplorerVertices = 8;

// Isomorphism-invariant label: the lexicographically smallest upper-triangle
// adjacency string over all relabellings (rows 0..n-1, bit i<j read in order).
struct CanonicalLabel {
  int n = 0;
  std::uint64_t code = 0;

  auto operator<=>(const CanonicalLabel&) const = default;
  Hypergraph graph() const;
  std::string str() const;  // "n<vertices>:<hex code>"
};

// Throws on hyperedges or more than 8 vertices.
CanonicalLabel canonical_form(const Hypergraph& g);

// Smallest canonical label in the local-complementation orbit of g, and the
// orbit's size counted up to isomorphism.
struct LcClass {
  CanonicalLabel id;
  int members = 0;
};
LcClass lc_class_id(const Hypergraph& g);
// Every non-isomorphic member of the orbit, sorted.
std::vector<CanonicalLabel> lc_orbit(const Hypergraph& g);

struct ExplorerOp {
  enum class Kind { LC, CZ, ZDelete };
  Kind kind = Kind::LC;
  int a = 0;  // vertex (seed labels, 0-based)
  int b = 0;  // CZ only
  std::string str() const;  // "LC(3)", "CZ(1,2)", "Z(5)" with 1-based labels
};

struct DeviceRuleset {
  std::vector<Hypergraph> seeds;
  std::vector<std::pair<int, int>> cz_pairs;  // 0-based seed labels
  bool allow_lc = true;
  bool allow_delete = true;

  // star8 seed, CZ on (1,2), (3,4), (5,6), (7,8) in 1-based labels.
  static DeviceRuleset device();
  // Four photons without intra-qudit gates: the post-selectable four-vertex
  // graphs (star and line) as seeds, LC and deletion only.
  static DeviceRuleset qubit_baseline();
  void validate() const;
};

// Which reached graphs are counted. Whole: the full graph must be connected
// with at least min_vertices vertices. Components: every connected component
// with at least min_vertices vertices counts on its own.
struct CountingConvention {
  enum class Mode { Whole, Components };
  Mode mode = Mode::Whole;
  int min_vertices = 2;
};

struct ExploredClass {
  CanonicalLabel id;
  CanonicalLabel representative;  // first graph of the class reached
  int members = 0;                // orbit size up to isomorphism
  int reached = 0;                // distinct members actually reached
  std::vector<ExplorerOp> recipe; // shortest found; replays from seed 0..k
  int seed_index = 0;
};

struct ExploreResult {
  std::map<CanonicalLabel, ExploredClass> classes;
  std::size_t graphs_reached = 0;    // distinct non-isomorphic graphs counted
  std::size_t graphs_in_classes = 0; // sum of orbit sizes
  std::size_t labelled_states = 0;   // labelled graphs visited
  long long steps = 0;
  bool saturated = false;

  nlohmann::json to_json() const;
};

struct ExploreOptions {
  long long budget = 1000000;      // random-walk steps
  std::uint64_t seed = 1;
  int walk_length = 64;            // steps before restarting at a seed
  double delete_weight = 0.05;     // relative to 1 for LC and CZ moves
  long long saturation_window = 100000;
  CountingConvention convention;
  int threads = 0;
};

// Random walks; each walk picks a seed and then moves at random, deletions
// down-weighted so that large graphs are explored before they shrink. The
// search stops early once saturation_window steps pass without a new counted
// graph (hence also without a new class). Walk w is seeded with
// derive_seed(seed, w) and walks are merged in index order, so results depend
// only on the options.
ExploreResult explore(const DeviceRuleset& rules, const ExploreOptions& options);

// Breadth-first search over every reachable labelled graph. Recipes are
// shortest in operation count.
ExploreResult explore_exhaustive(const DeviceRuleset& rules, const CountingConvention& convention = {});

// Applies a recipe to the labelled seed graph. Deleted vertices are dropped
// and the rest renumbered in order.
Hypergraph replay_graph(const Hypergraph& seed, const std::vector<ExplorerOp>& recipe);
// The same on the state vector: LC unitaries, CZ gates and Z measurements with
// outcome 0.
QubitState replay_state(const Hypergraph& seed, const std::vector<ExplorerOp>& recipe);

}  // namespace qg
