// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0

#include "qgraph/explorer.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <deque>
#include <functional>
#include <mutex>
#include <random>
#include <set>
#include <unordered_map>

#include "qgraph/named.hpp"
#include "qgraph/parallel.hpp"

namespace qg {

namespace {

constexpr int kN = kMaxExplorerVertices;

// Upper-triangle edge index for the 8 seed labels.
struct EdgeIndex {
  std::array<std::array<int, kN>, kN> idx{};
  EdgeIndex() {
    int c = 0;
    for (int i = 0; i < kN; ++i) {
      for (int j = i + 1; j < kN; ++j) idx[i][j] = idx[j][i] = c++;
    }
  }
};
const EdgeIndex kEdge;

// Labelled graph on a subset of the seed labels.
struct Labelled {
  std::uint32_t vmask = 0;
  std::uint32_t edges = 0;  // 28 bits
  std::uint64_t key() const { return (std::uint64_t{vmask} << 28) | edges; }
  bool present(int v) const { return (vmask >> v) & 1u; }
  bool edge(int u, int v) const { return (edges >> kEdge.idx[u][v]) & 1u; }
  int size() const { return __builtin_popcount(vmask); }
};

// Compact graph on vertices 0..n-1.
struct Compact {
  int n = 0;
  std::array<std::uint32_t, kN> adj{};
};

Labelled lc(Labelled s, int v) {
  std::vector<int> nb;
  for (int u = 0; u < kN; ++u) {
    if (u != v && s.present(u) && s.edge(u, v)) nb.push_back(u);
  }
  for (std::size_t i = 0; i < nb.size(); ++i) {
    for (std::size_t j = i + 1; j < nb.size(); ++j) s.edges ^= 1u << kEdge.idx[nb[i]][nb[j]];
  }
  return s;
}

Labelled delete_vertex(Labelled s, int v) {
  for (int u = 0; u < kN; ++u) {
    if (u != v) s.edges &= ~(1u << kEdge.idx[u][v]);
  }
  s.vmask &= ~(1u << v);
  return s;
}

Labelled toggle(Labelled s, int a, int b) {
  s.edges ^= 1u << kEdge.idx[a][b];
  return s;
}

Labelled apply(const Labelled& s, const ExplorerOp& op) {
  switch (op.kind) {
    case ExplorerOp::Kind::LC:
      return lc(s, op.a);
    case ExplorerOp::Kind::CZ:
      return toggle(s, op.a, op.b);
    case ExplorerOp::Kind::ZDelete:
      return delete_vertex(s, op.a);
  }
  return s;
}

Compact compact_of(const Labelled& s, std::uint32_t subset) {
  Compact g;
  std::array<int, kN> map{};
  for (int v = 0; v < kN; ++v) {
    if ((subset >> v) & 1u) map[v] = g.n++;
  }
  for (int u = 0; u < kN; ++u) {
    if (!((subset >> u) & 1u)) continue;
    for (int v = u + 1; v < kN; ++v) {
      if (((subset >> v) & 1u) && s.edge(u, v)) {
        g.adj[map[u]] |= 1u << map[v];
        g.adj[map[v]] |= 1u << map[u];
      }
    }
  }
  return g;
}

Compact compact_of(const Hypergraph& h) {
  if (!h.is_graph()) throw Error("explorer: hyperedges are not supported");
  if (h.num_vertices() > kN) throw Error("explorer: at most 8 vertices");
  Compact g;
  g.n = h.num_vertices();
  for (const auto& e : h.edges()) {
    g.adj[e[0]] |= 1u << e[1];
    g.adj[e[1]] |= 1u << e[0];
  }
  return g;
}

std::uint64_t adjacency_code(const Compact& g, const std::array<int, kN>& p) {
  std::uint64_t c = 0;
  for (int i = 0; i < g.n; ++i) {
    for (int j = i + 1; j < g.n; ++j) c = (c << 1) | ((g.adj[p[i]] >> p[j]) & 1u);
  }
  return c;
}

std::uint64_t compact_key(const Compact& g) {
  std::array<int, kN> id{};
  for (int i = 0; i < kN; ++i) id[i] = i;
  return (std::uint64_t(g.n) << 40) | adjacency_code(g, id);
}

// Minimum over relabellings that order vertices by an isomorphism invariant
// (degree, then the sorted degrees of the neighbours); only permutations
// inside cells of equal invariant are tried, which keeps the result canonical.
CanonicalLabel canonical_uncached(const Compact& g) {
  std::vector<std::pair<std::vector<int>, int>> inv;
  for (int v = 0; v < g.n; ++v) {
    std::vector<int> key{__builtin_popcount(g.adj[v])};
    std::vector<int> nd;
    for (int u = 0; u < g.n; ++u) {
      if ((g.adj[v] >> u) & 1u) nd.push_back(__builtin_popcount(g.adj[u]));
    }
    std::sort(nd.begin(), nd.end());
    key.insert(key.end(), nd.begin(), nd.end());
    inv.push_back({key, v});
  }
  std::sort(inv.begin(), inv.end());
  std::vector<std::vector<int>> cells;
  for (int i = 0; i < g.n; ++i) {
    if (i == 0 || inv[i].first != inv[i - 1].first) cells.emplace_back();
    cells.back().push_back(inv[i].second);
  }
  for (auto& c : cells) std::sort(c.begin(), c.end());

  std::uint64_t best = ~std::uint64_t{0};
  std::array<int, kN> p{};
  std::function<void(std::size_t, int)> rec = [&](std::size_t ci, int pos) {
    if (ci == cells.size()) {
      best = std::min(best, adjacency_code(g, p));
      return;
    }
    std::vector<int> cell = cells[ci];
    do {
      for (std::size_t k = 0; k < cell.size(); ++k) p[pos + k] = cell[k];
      rec(ci + 1, pos + static_cast<int>(cell.size()));
    } while (std::next_permutation(cell.begin(), cell.end()));
  };
  rec(0, 0);
  return {g.n, g.n < 2 ? 0 : best};
}

CanonicalLabel canonical(const Compact& g) {
  thread_local std::unordered_map<std::uint64_t, CanonicalLabel> cache;
  const std::uint64_t k = compact_key(g);
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;
  const CanonicalLabel c = canonical_uncached(g);
  cache.emplace(k, c);
  return c;
}

Compact compact_of(const CanonicalLabel& c) {
  Compact g;
  g.n = c.n;
  int b = c.n * (c.n - 1) / 2 - 1;
  for (int i = 0; i < c.n; ++i) {
    for (int j = i + 1; j < c.n; ++j, --b) {
      if ((c.code >> b) & 1u) {
        g.adj[i] |= 1u << j;
        g.adj[j] |= 1u << i;
      }
    }
  }
  return g;
}

Compact compact_lc(Compact g, int v) {
  const std::uint32_t nb = g.adj[v];
  for (int a = 0; a < g.n; ++a) {
    if ((nb >> a) & 1u) g.adj[a] ^= nb & ~(1u << a);
  }
  return g;
}

std::uint32_t component_of(const Labelled& s, int start) {
  std::uint32_t seen = 1u << start, frontier = seen;
  while (frontier) {
    std::uint32_t next = 0;
    for (int v = 0; v < kN; ++v) {
      if (!((frontier >> v) & 1u)) continue;
      for (int u = 0; u < kN; ++u) {
        if (u != v && s.present(u) && s.edge(u, v)) next |= 1u << u;
      }
    }
    next &= ~seen;
    seen |= next;
    frontier = next;
  }
  return seen;
}

// Canonical labels of the graphs that count for this labelled state.
std::vector<CanonicalLabel> counted(const Labelled& s, const CountingConvention& conv) {
  std::vector<CanonicalLabel> out;
  if (s.vmask == 0) return out;
  if (conv.mode == CountingConvention::Mode::Whole) {
    const int first = __builtin_ctz(s.vmask);
    if (s.size() >= conv.min_vertices && component_of(s, first) == s.vmask) {
      out.push_back(canonical(compact_of(s, s.vmask)));
    }
    return out;
  }
  std::uint32_t left = s.vmask;
  while (left) {
    const std::uint32_t comp = component_of(s, __builtin_ctz(left));
    left &= ~comp;
    if (__builtin_popcount(comp) >= conv.min_vertices) out.push_back(canonical(compact_of(s, comp)));
  }
  return out;
}

std::vector<ExplorerOp> moves(const Labelled& s, const DeviceRuleset& r) {
  std::vector<ExplorerOp> out;
  for (int v = 0; v < kN; ++v) {
    if (!s.present(v)) continue;
    if (r.allow_lc) out.push_back({ExplorerOp::Kind::LC, v, 0});
    if (r.allow_delete) out.push_back({ExplorerOp::Kind::ZDelete, v, 0});
  }
  for (const auto& [a, b] : r.cz_pairs) {
    if (s.present(a) && s.present(b)) out.push_back({ExplorerOp::Kind::CZ, a, b});
  }
  return out;
}

Labelled labelled_of(const Hypergraph& h) {
  const Compact g = compact_of(h);
  Labelled s;
  s.vmask = g.n == 0 ? 0 : ((1u << g.n) - 1);
  for (int u = 0; u < g.n; ++u) {
    for (int v = u + 1; v < g.n; ++v) {
      if ((g.adj[u] >> v) & 1u) s.edges |= 1u << kEdge.idx[u][v];
    }
  }
  return s;
}

struct Found {
  CanonicalLabel graph;
  int seed = 0;
  std::vector<ExplorerOp> recipe;
};

// Merges first-reached graphs into the result in the order given.
class Collector {
 public:
  explicit Collector(ExploreResult& r) : r_(r) {}

  // True when the graph is new.
  bool add(const Found& f) {
    auto it = graphs_.find(f.graph);
    const bool fresh = it == graphs_.end();
    if (fresh) {
      graphs_.emplace(f.graph, f.recipe.size());
      ++r_.graphs_reached;
    } else if (it->second <= f.recipe.size()) {
      return false;
    } else {
      it->second = f.recipe.size();
    }
    const LcClass cls = lc_class_id(f.graph.graph());
    auto [pos, inserted] = r_.classes.try_emplace(cls.id);
    ExploredClass& c = pos->second;
    if (inserted) {
      c.id = cls.id;
      c.representative = f.graph;
      c.members = cls.members;
      c.recipe = f.recipe;
      c.seed_index = f.seed;
      r_.graphs_in_classes += static_cast<std::size_t>(cls.members);
    } else if (f.recipe.size() < c.recipe.size()) {
      c.recipe = f.recipe;
      c.seed_index = f.seed;
      c.representative = f.graph;
    }
    if (fresh) ++c.reached;
    return fresh;
  }

 private:
  ExploreResult& r_;
  std::map<CanonicalLabel, std::size_t> graphs_;
};

std::vector<Labelled> seed_states(const DeviceRuleset& rules) {
  std::vector<Labelled> out;
  for (const auto& s : rules.seeds) out.push_back(labelled_of(s));
  return out;
}

}  // namespace

// ---------------------------------------------------------------- labels

Hypergraph CanonicalLabel::graph() const {
  const Compact g = compact_of(*this);
  std::vector<Edge> edges;
  for (int i = 0; i < g.n; ++i) {
    for (int j = i + 1; j < g.n; ++j) {
      if ((g.adj[i] >> j) & 1u) edges.push_back({i, j});
    }
  }
  return Hypergraph(g.n, edges);
}

std::string CanonicalLabel::str() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "n%d:%llx", n, static_cast<unsigned long long>(code));
  return buf;
}

CanonicalLabel canonical_form(const Hypergraph& g) { return canonical(compact_of(g)); }

std::vector<CanonicalLabel> lc_orbit(const Hypergraph& g) {
  const CanonicalLabel start = canonical_form(g);
  std::set<CanonicalLabel> seen{start};
  std::vector<CanonicalLabel> todo{start};
  while (!todo.empty()) {
    const CanonicalLabel x = todo.back();
    todo.pop_back();
    const Compact c = compact_of(x);
    for (int v = 0; v < c.n; ++v) {
      const CanonicalLabel y = canonical(compact_lc(c, v));
      if (seen.insert(y).second) todo.push_back(y);
    }
  }
  return {seen.begin(), seen.end()};
}

LcClass lc_class_id(const Hypergraph& g) {
  static std::mutex mu;
  static std::map<CanonicalLabel, LcClass> cache;
  const CanonicalLabel c = canonical_form(g);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(c);
    if (it != cache.end()) return it->second;
  }
  const auto orbit = lc_orbit(g);
  const LcClass cls{orbit.front(), static_cast<int>(orbit.size())};
  std::lock_guard<std::mutex> lock(mu);
  for (const auto& m : orbit) cache[m] = cls;
  return cls;
}

std::string ExplorerOp::str() const {
  switch (kind) {
    case Kind::LC:
      return "LC(" + std::to_string(a + 1) + ")";
    case Kind::CZ:
      return "CZ(" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ")";
    case Kind::ZDelete:
      return "Z(" + std::to_string(a + 1) + ")";
  }
  return "";
}

// --------------------------------------------------------------- rulesets

DeviceRuleset DeviceRuleset::device() {
  DeviceRuleset r;
  r.seeds = {star_graph(8)};
  r.cz_pairs = {{0, 1}, {2, 3}, {4, 5}, {6, 7}};
  return r;
}

DeviceRuleset DeviceRuleset::qubit_baseline() {
  DeviceRuleset r;
  r.seeds = {star_graph(4), line_graph(4)};
  return r;
}

void DeviceRuleset::validate() const {
  if (seeds.empty()) throw Error("ruleset: no seed graph");
  for (const auto& s : seeds) {
    if (!s.is_graph() || s.num_vertices() > kN || s.num_vertices() < 1) {
      throw Error("ruleset: seeds must be graphs on 1..8 vertices");
    }
  }
  for (const auto& [a, b] : cz_pairs) {
    if (a < 0 || b < 0 || a >= kN || b >= kN || a == b) throw Error("ruleset: bad CZ pair");
  }
}

// ---------------------------------------------------------------- results

nlohmann::json ExploreResult::to_json() const {
  nlohmann::json j;
  j["class_count"] = classes.size();
  j["graphs_reached"] = graphs_reached;
  j["graphs_in_classes"] = graphs_in_classes;
  j["labelled_states"] = labelled_states;
  j["steps"] = steps;
  j["saturated"] = saturated;
  auto& cls = j["classes"] = nlohmann::json::object();
  for (const auto& [id, c] : classes) {
    nlohmann::json e;
    e["vertices"] = id.n;
    e["representative"] = c.representative.graph().to_json();
    e["members"] = c.members;
    e["reached"] = c.reached;
    e["seed"] = c.seed_index;
    auto& rec = e["recipe"] = nlohmann::json::array();
    for (const auto& op : c.recipe) rec.push_back(op.str());
    cls[id.str()] = e;
  }
  return j;
}

// -------------------------------------------------------------- searches

ExploreResult explore(const DeviceRuleset& rules, const ExploreOptions& o) {
  rules.validate();
  if (o.budget < 0) throw Error("explore: budget must be non-negative");
  if (o.walk_length < 1) throw Error("explore: walk length must be positive");
  const auto seeds = seed_states(rules);

  ExploreResult result;
  Collector collect(result);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    for (const auto& g : counted(seeds[i], o.convention)) collect.add({g, static_cast<int>(i), {}});
  }

  const long long walks = (o.budget + o.walk_length - 1) / o.walk_length;
  constexpr long long kBatch = 2048;
  long long last_new = 0;
  std::unordered_map<std::uint64_t, char> labelled;
  for (long long start = 0; start < walks && !result.saturated; start += kBatch) {
    const long long count = std::min(kBatch, walks - start);
    std::vector<std::vector<Found>> found(count);
    std::vector<std::vector<std::uint64_t>> keys(count);
    parallel_for(
        static_cast<std::size_t>(count),
        [&](std::size_t i) {
          const long long w = start + static_cast<long long>(i);
          const long long len = std::min<long long>(o.walk_length, o.budget - w * o.walk_length);
          std::mt19937_64 rng(derive_seed(o.seed, static_cast<std::uint64_t>(w)));
          std::map<CanonicalLabel, std::size_t> best;  // index into found
          auto& out = found[i];
          int seed_index = 0;
          Labelled s;
          std::vector<ExplorerOp> recipe;
          auto restart = [&] {
            seed_index = static_cast<int>(std::uniform_int_distribution<std::size_t>(0, seeds.size() - 1)(rng));
            s = seeds[seed_index];
            recipe.clear();
          };
          restart();
          for (long long step = 0; step < len; ++step) {
            const auto ops = moves(s, rules);
            if (ops.empty()) {
              restart();
              continue;
            }
            std::vector<double> w;
            for (const auto& m : ops) w.push_back(m.kind == ExplorerOp::Kind::ZDelete ? o.delete_weight : 1.0);
            const ExplorerOp op = ops[std::discrete_distribution<std::size_t>(w.begin(), w.end())(rng)];
            s = apply(s, op);
            recipe.push_back(op);
            keys[i].push_back(s.key());
            for (const auto& g : counted(s, o.convention)) {
              auto it = best.find(g);
              if (it == best.end()) {
                best.emplace(g, out.size());
                out.push_back({g, seed_index, recipe});
              } else if (out[it->second].recipe.size() > recipe.size()) {
                out[it->second] = {g, seed_index, recipe};
              }
            }
            if (s.size() < 2) restart();
          }
        },
        o.threads);
    for (long long i = 0; i < count; ++i) {
      const long long w = start + i;
      for (const auto& f : found[i]) {
        if (collect.add(f)) last_new = w * o.walk_length;
      }
      for (auto k : keys[i]) labelled.emplace(k, 0);
      result.steps = std::min(o.budget, (w + 1) * o.walk_length);
      if (result.steps - last_new >= o.saturation_window) {
        result.saturated = true;
        break;
      }
    }
  }
  for (const auto& s : seeds) labelled.emplace(s.key(), 0);
  result.labelled_states = labelled.size();
  return result;
}

ExploreResult explore_exhaustive(const DeviceRuleset& rules, const CountingConvention& convention) {
  rules.validate();
  const auto seeds = seed_states(rules);
  struct Node {
    std::uint64_t parent = 0;
    ExplorerOp op;
    int seed = 0;
    bool root = false;
  };
  std::unordered_map<std::uint64_t, Node> nodes;
  std::deque<Labelled> queue;
  std::vector<Labelled> order;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (nodes.try_emplace(seeds[i].key(), Node{0, {}, static_cast<int>(i), true}).second) {
      queue.push_back(seeds[i]);
    }
  }
  while (!queue.empty()) {
    const Labelled s = queue.front();
    queue.pop_front();
    order.push_back(s);
    const int seed = nodes[s.key()].seed;
    for (const auto& op : moves(s, rules)) {
      const Labelled t = apply(s, op);
      if (nodes.try_emplace(t.key(), Node{s.key(), op, seed, false}).second) queue.push_back(t);
    }
  }
  auto recipe_of = [&](std::uint64_t key) {
    std::vector<ExplorerOp> ops;
    while (!nodes.at(key).root) {
      ops.push_back(nodes.at(key).op);
      key = nodes.at(key).parent;
    }
    std::reverse(ops.begin(), ops.end());
    return ops;
  };
  ExploreResult result;
  Collector collect(result);
  for (const auto& s : order) {  // breadth-first, so the first hit is shortest
    for (const auto& g : counted(s, convention)) {
      collect.add({g, nodes.at(s.key()).seed, recipe_of(s.key())});
    }
  }
  result.labelled_states = nodes.size();
  result.saturated = true;
  return result;
}

// ----------------------------------------------------------------- replay

namespace {

// Current index of a seed label, given which labels are still present.
int position(const std::vector<int>& present, int label) {
  auto it = std::find(present.begin(), present.end(), label);
  if (it == present.end()) throw Error("replay: vertex " + std::to_string(label + 1) + " was deleted");
  return static_cast<int>(it - present.begin());
}

template <class OnOp>
void walk_recipe(const Hypergraph& seed, const std::vector<ExplorerOp>& recipe, OnOp on_op) {
  std::vector<int> present(seed.num_vertices());
  for (int v = 0; v < seed.num_vertices(); ++v) present[v] = v;
  for (const auto& op : recipe) {
    const int a = position(present, op.a);
    const int b = op.kind == ExplorerOp::Kind::CZ ? position(present, op.b) : -1;
    on_op(op, a, b);
    if (op.kind == ExplorerOp::Kind::ZDelete) present.erase(present.begin() + a);
  }
}

}  // namespace

Hypergraph replay_graph(const Hypergraph& seed, const std::vector<ExplorerOp>& recipe) {
  Hypergraph g = seed;
  walk_recipe(seed, recipe, [&](const ExplorerOp& op, int a, int b) {
    switch (op.kind) {
      case ExplorerOp::Kind::LC:
        g = local_complement(g, a);
        break;
      case ExplorerOp::Kind::CZ:
        g = toggle_cz(g, a, b);
        break;
      case ExplorerOp::Kind::ZDelete:
        g = g.remove_vertex(a);
        break;
    }
  });
  return g;
}

QubitState replay_state(const Hypergraph& seed, const std::vector<ExplorerOp>& recipe) {
  Hypergraph g = seed;
  QubitState psi = build_state(seed);
  walk_recipe(seed, recipe, [&](const ExplorerOp& op, int a, int b) {
    switch (op.kind) {
      case ExplorerOp::Kind::LC:
        psi = apply_gates(psi, lc_unitary(g, a));
        g = local_complement(g, a);
        break;
      case ExplorerOp::Kind::CZ:
        psi = apply_unitary(psi, gates::CZ(), {a, b});
        g = toggle_cz(g, a, b);
        break;
      case ExplorerOp::Kind::ZDelete: {
        ZMeasureResult z = z_measure_vertex(psi, g, a, 0);
        psi = z.post;
        g = z.residual;
        break;
      }
    }
  });
  return psi;
}

}  // namespace qg
