// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0

#include "qgraph/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "qgraph/device.hpp"
#include "qgraph/explorer.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/mbqc.hpp"
#include "qgraph/named.hpp"
#include "qgraph/noise_map.hpp"
#include "qgraph/parallel.hpp"
#include "qgraph/pauli.hpp"
#include "qgraph/pea.hpp"
#include "qgraph/rates.hpp"
#include "qgraph/verification.hpp"

#ifndef QGRAPH_VERSION_STRING
#define QGRAPH_VERSION_STRING "unknown"
#endif

namespace qg {

using json = nlohmann::json;

std::string artifact_version() { return QGRAPH_VERSION_STRING; }

namespace {

// A figure block under construction.
struct Table {
  std::string title;
  std::vector<std::string> columns;
  json rows = json::array();

  void add(json row) {
    if (row.size() != columns.size()) throw Error("row width does not match the columns of " + title);
    rows.push_back(std::move(row));
  }
  json to_json() const { return {{"title", title}, {"columns", columns}, {"rows", rows}}; }
};

// Collects figure blocks and the summary as an experiment runs, so a failure
// still leaves the finished parts in the report.
struct Sink {
  json figures = json::object();
  json summary = json::object();
  void figure(const std::string& id, const Table& t) { figures[id] = t.to_json(); }
};

using Runner = std::function<void(const json& params, std::uint64_t seed, Sink& out)>;

struct Experiment {
  ExperimentInfo info;
  Runner run;
};

// ------------------------------------------------------------- helpers

double overlap(const Vec& a, const Vec& b) { return std::norm(a.normalized().dot(b.normalized())); }

std::vector<double> grid(double step) {
  const int n = static_cast<int>(std::lround(1.0 / step));
  if (n < 1 || std::abs(n * step - 1.0) > 1e-9) throw Error("p_step must divide 1");
  std::vector<double> out;
  for (int k = 0; k <= n; ++k) out.push_back(static_cast<double>(k) / n);
  return out;
}

Vec named_ket(const std::string& s) {
  static const std::map<std::string, std::function<Vec()>> kKets = {
      {"0", kets::zero},   {"1", kets::one},       {"+", kets::plus},
      {"-", kets::minus},  {"+i", kets::plus_i},   {"-i", kets::minus_i}};
  const auto it = kKets.find(s);
  if (it == kKets.end()) throw Error("unknown input state '" + s + "' (use 0, 1, +, -, +i, -i)");
  return it->second();
}

TeleportMethod teleport_method(const std::string& s) {
  if (s == "analytic") return TeleportMethod::Analytic;
  if (s == "density") return TeleportMethod::DensityMatrix;
  if (s == "sampled") return TeleportMethod::Sampled;
  if (s == "detuned") return TeleportMethod::Detuned;
  throw Error("unknown method '" + s + "' (analytic, density, sampled, detuned)");
}

TieRule tie_rule(const std::string& s) {
  if (s == "fail") return TieRule::Fail;
  if (s == "half") return TieRule::Half;
  throw Error("unknown tie rule '" + s + "' (fail, half)");
}

BranchedCode branched_code(const std::string& s) {
  if (s == "B3") return BranchedCode::B3;
  if (s == "B5") return BranchedCode::B5;
  if (s == "B7") return BranchedCode::B7;
  if (s == "crazy6") return BranchedCode::Crazy6;
  throw Error("unknown code '" + s + "' (B3, B5, B7, crazy6)");
}

ErrorMode error_mode(const std::string& s) {
  if (s == "one") return ErrorMode::OneQubit;
  if (s == "two") return ErrorMode::TwoQubit;
  if (s == "all") return ErrorMode::AllQubits;
  throw Error("unknown error mode '" + s + "' (one, two, all)");
}

// Generators of a named state: from its target (hyper)graph, or the GHZ
// generators for the fused GHZ8 state.
std::vector<PauliSum> named_generators(const Recipe& r, int n) {
  if (r.target) return stabilizer_generators(*r.target);
  if (r.name != "ghz8") throw Error("no stabilizer generators for " + r.name);
  std::vector<PauliSum> out;
  out.emplace_back(PauliString::parse(std::string(static_cast<std::size_t>(n), 'X')));
  for (int q = 0; q + 1 < n; ++q) {
    std::string s(static_cast<std::size_t>(n), 'I');
    s[static_cast<std::size_t>(q)] = s[static_cast<std::size_t>(q + 1)] = 'Z';
    out.emplace_back(PauliString::parse(s));
  }
  return out;
}

QubitState named_reference(const Recipe& r, int n) {
  return r.target ? build_state(*r.target) : ghz_state(n);
}

// ----------------------------------------------------------- experiments

void run_state_fidelity(const json& p, std::uint64_t seed, Sink& out) {
  const SparseTarget target = four_p_four_d_target();
  const QubitState ideal = four_p_four_d_state();

  const OffDiagResult plan = offdiag_plan(target);
  Table pt{"off-diagonal measurement plan by GHZ size", {"ghz_size", "pairs", "settings", "projectors"}};
  std::map<int, std::pair<int, long long>> by_size;  // settings, projectors
  for (const auto& t : plan.terms) {
    auto& e = by_size[static_cast<int>(t.qudits.size())];
    e.first += t.settings;
    e.second += t.projectors;
  }
  for (const auto& [m, pairs] : plan.pairs_by_size) pt.add({m, pairs, by_size[m].first, by_size[m].second});
  out.figure("plan", pt);
  out.summary["projectors"] = plan.projectors;
  out.summary["naive_projectors"] = plan.naive_projectors;
  out.summary["diagonal_projectors"] = plan.diagonal_projectors;

  Table ft{"direct fidelity of the four-qudit state", {"case", "weight", "fidelity_offdiag", "fidelity_direct"}};
  auto row = [&](const std::string& name, double weight, const DensityOperator& rho) {
    ft.add({name, weight, direct_fidelity_offdiag(rho, target).fidelity, fidelity(rho, ideal)});
  };
  row("ideal", 0.0, DensityOperator(ideal));

  const double eps = p.at("distinguishability").get<double>();
  const FusionResult chip = fusion_postselect(ChipConfig::four_p_four_d(), {eps, eps});
  row("chip", eps, chip.state);
  out.summary["chip_success_probability"] = chip.probability;

  const int perturbed = p.at("perturbed").get<int>();
  const double max_weight = p.at("max_weight").get<double>();
  for (int k = 0; k < perturbed; ++k) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    std::normal_distribution<double> g(0.0, 1.0);
    Vec v(256);
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(g(rng), g(rng));
    const double w = std::uniform_real_distribution<double>(0.0, max_weight)(rng);
    const DensityOperator noise(QubitState(8, v.normalized()));
    row("perturbed_" + std::to_string(k), w,
        DensityOperator::mixture({1 - w, w}, {DensityOperator(ideal), noise}));
  }
  out.figure("fig1c", ft);
}

void run_graph_zoo(const json& p, std::uint64_t seed, Sink& out) {
  const long long shots = p.at("shots").get<long long>();
  Table t{"named states: generators and fidelity to the target",
          {"state", "qubits", "generators", "min_generator", "mean_generator", "fidelity"}};
  std::size_t idx = 0;
  for (const auto& name : p.at("states").get<std::vector<std::string>>()) {
    const Recipe r = named_recipe(name);
    const QubitState psi = run_recipe(r);
    const int n = psi.num_qubits();
    const auto gens = named_generators(r, n);
    double lo = 1e300, sum = 0.0;
    for (std::size_t g = 0; g < gens.size(); ++g) {
      double e = expectation(psi, gens[g]).real();
      if (shots > 0 && gens[g].is_single_pauli()) {
        const auto [coef, ps] = gens[g].expanded().front();
        const MeasurementSetting s = MeasurementSetting::from_pauli(ps.letters_string());
        const CountsRecord c = simulate_counts(psi, s, shots, derive_seed(seed, (idx << 16) + g));
        e = coef.real() * estimate_expectation(s, c.counts, ps);
      }
      lo = std::min(lo, e);
      sum += e;
    }
    t.add({name, n, gens.size(), lo, sum / static_cast<double>(gens.size()),
           fidelity(psi, named_reference(r, n))});
    ++idx;
  }
  out.figure("fig2", t);
}

void run_mbqc_gates(const json&, std::uint64_t seed, Sink& out) {
  std::mt19937_64 rng(seed);
  auto fidelity_of = [&](const std::function<MeasurementPattern(const Vec&)>& make, const QubitState& resource,
                         const Mat& gate, bool tracked) {
    auto runner = [&](const Vec& in) {
      const MeasurementPattern pat = make(in);
      return pattern_output_qubit(run_pattern(resource, pat, tracked ? &rng : nullptr), pat);
    };
    return process_fidelity(process_tomography(runner).chi, chi_of_unitary(gate));
  };

  const QubitState l5 = named_state("L5");
  Table s9{"five-qubit line gates", {"gate", "alpha", "beta", "gamma", "F_postselect", "F_tracked"}};
  for (const std::string g : {"X", "H", "RZ(pi/2)"}) {
    const auto a = euler_angles(g);
    auto make = [&](ByproductPolicy pol) {
      return [&, pol](const Vec& in) { return line5_pattern(a, in, pol); };
    };
    s9.add({g, a[0], a[1], a[2], fidelity_of(make(ByproductPolicy::PostSelectZero), l5, named_gate(g), false),
            fidelity_of(make(ByproductPolicy::TrackAndCorrect), l5, named_gate(g), true)});
  }
  out.figure("tableS9", s9);

  const QubitState l3 = named_state("L3");
  const QubitState c6 = named_state("crazy6");
  Table s11{"three-vertex line gates, physical and logical",
            {"gate", "alpha", "encoding", "F_postselect", "F_tracked"}};
  for (Encoding enc : {Encoding::Physical, Encoding::Logical}) {
    const QubitState& res = enc == Encoding::Physical ? l3 : c6;
    for (const std::string g : {"I", "X", "RX(pi/2)", "RX(-pi/2)"}) {
      const double a = rx_angle(g);
      auto make = [&](ByproductPolicy pol) {
        return [&, pol](const Vec& in) { return line3_pattern(a, in, enc, pol); };
      };
      s11.add({g, a, enc == Encoding::Physical ? "physical" : "logical",
               fidelity_of(make(ByproductPolicy::PostSelectZero), res, named_gate(g), false),
               fidelity_of(make(ByproductPolicy::TrackAndCorrect), res, named_gate(g), true)});
    }
  }
  out.figure("tableS11", s11);

  const QubitState two = apply_unitary(QubitState::product({kets::plus(), kets::plus()}), gates::CZ(), {0, 1});
  Table s10{"input encoding by projection", {"projected", "encoded", "overlap"}};
  const std::vector<std::pair<std::string, std::string>> rows = {
      {"0", "+"}, {"1", "-"}, {"+", "0"}, {"-", "1"}, {"+i", "+i"}, {"-i", "-i"}};
  for (const auto& [proj, enc] : rows) {
    const auto e = encode_input_by_measurement(two, named_ket(proj));
    s10.add({proj, enc, overlap(e.encoded.amplitudes(), named_ket(enc))});
  }
  out.figure("tableS10", s10);
}

void run_teleport_sweep(const json& p, std::uint64_t seed, Sink& out) {
  const auto ps = grid(p.at("p_step").get<double>());
  const TeleportMethod method = teleport_method(p.at("method").get<std::string>());
  const TieRule ties = tie_rule(p.at("ties").get<std::string>());
  const Vec input = named_ket(p.at("input").get<std::string>());
  const auto codes = p.at("codes").get<std::vector<std::string>>();
  const auto modes = p.at("modes").get<std::vector<std::string>>();

  Table t{"branched-code teleportation", {"code", "mode", "p", "F", "stderr"}};
  std::map<std::string, std::vector<double>> all_mode;
  std::uint64_t stream = 0;
  for (const auto& c : codes) {
    for (const auto& m : modes) {
      for (double pv : ps) {
        TeleportOptions o;
        o.mode = error_mode(m);
        o.p = pv;
        o.input = input;
        o.method = method;
        o.ties = ties;
        o.shots = p.at("shots").get<long long>();
        o.seed = derive_seed(seed, stream++);
        const TeleportResult r = teleport_branched(branched_code(c), o);
        t.add({c, m, pv, r.fidelity, r.std_error});
        if (m == "all") all_mode[c].push_back(r.fidelity);
      }
    }
  }
  out.figure("teleport", t);

  Table wide{"teleportation fidelity, every middle qubit dephased", {"p", "F_B3", "F_B5", "F_B7"}};
  if (all_mode.count("B3") && all_mode.count("B5") && all_mode.count("B7")) {
    for (std::size_t k = 0; k < ps.size(); ++k) {
      wide.add({ps[k], all_mode["B3"][k], all_mode["B5"][k], all_mode["B7"][k]});
    }
    out.figure("fig3d", wide);
  }
}

void run_loss_sweep(const json& p, std::uint64_t, Sink& out) {
  const TeleportMethod method = teleport_method(p.at("method").get<std::string>());
  const TieRule ties = tie_rule(p.at("ties").get<std::string>());
  const Vec input = named_ket(p.at("input").get<std::string>());
  const BranchedLayout layout = branched_layout(BranchedCode::B7);
  Table t{"B7 teleportation with one photon lost", {"lost", "p", "survivors", "F", "F_majority"}};
  for (double pv : p.at("p").get<std::vector<double>>()) {
    TeleportOptions o;
    o.p = pv;
    o.input = input;
    o.method = method;
    o.ties = ties;
    const int middle = static_cast<int>(layout.middle.size());
    t.add({"none", pv, middle, teleport_branched(BranchedCode::B7, o).fidelity,
           majority_fidelity(middle, middle, pv, ties)});
    for (int photon : p.at("photons").get<std::vector<int>>()) {
      int survivors = middle;
      for (int q : layout.photons.at(static_cast<std::size_t>(photon))) {
        survivors -= static_cast<int>(std::count(layout.middle.begin(), layout.middle.end(), q));
      }
      const char name[2] = {static_cast<char>('A' + photon), 0};
      t.add({name, pv, survivors, loss_teleport(photon, pv, input, method, ties).fidelity,
             majority_fidelity(survivors, survivors, pv, ties)});
    }
  }
  out.figure("figS14", t);
}

void run_pea(const json& p, std::uint64_t seed, Sink& out) {
  PeaOptions o;
  o.bits = p.at("bits").get<int>();
  o.samples = p.at("samples").get<int>();
  o.noise.dephasing = p.at("dephasing").get<double>();
  o.exact = p.at("exact").get<bool>();
  Table t{"phase estimation per bit", {"phi0", "bit", "encoding", "P1", "correct"}};
  Table detail{"phase estimation per bit, with exact values",
               {"phi0", "bit", "encoding", "samples", "attempts", "P1", "P1_exact", "P1_ideal", "decided", "true_bit"}};
  std::map<std::string, std::vector<BitCounts>> counts;
  std::map<std::string, int> correct, phases_ok;
  const int phases = 1 << o.bits;
  for (int k = 0; k < phases; ++k) {
    const double phi0 = static_cast<double>(k) / phases;
    for (PeaEncoding enc : {PeaEncoding::Physical, PeaEncoding::Logical}) {
      const std::string name = enc == PeaEncoding::Physical ? "physical" : "logical";
      o.encoding = enc;
      o.seed = derive_seed(seed, static_cast<std::uint64_t>(k));
      const PeaRun r = pea_run(phi0, o);
      for (const auto& b : r.bits) {
        t.add({phi0, b.index, name, b.p1, b.correct() ? 1 : 0});
        detail.add({phi0, b.index, name, b.samples, b.attempts, b.p1, b.p1_exact, b.p1_ideal, b.bit, b.true_bit});
      }
      correct[name] += r.correct_bits();
      phases_ok[name] += r.correct_bits() == o.bits;
      const auto c = bit_counts(r);
      counts[name].insert(counts[name].end(), c.begin(), c.end());
    }
  }
  out.figure("fig4c", t);
  out.figure("pea_bits", detail);
  for (const auto& [name, c] : correct) {
    out.summary[name] = {{"correct_bits", c},
                         {"bit_cases", phases * o.bits},
                         {"success_rate", static_cast<double>(c) / (phases * o.bits)},
                         {"phases_recovered", phases_ok[name]}};
  }
  if (!o.exact) {
    out.summary["bootstrap_confidence"] =
        bootstrap_confidence(counts["physical"], counts["logical"], p.at("bootstrap_rounds").get<int>(), seed);
  }
}

void run_noise_map(const json& p, std::uint64_t seed, Sink& out) {
  NoiseMapOptions o;
  o.sigma_v = p.at("sigma_v").get<std::vector<double>>();
  o.epsilon = p.at("epsilon").get<std::vector<double>>();
  o.trials = p.at("trials").get<int>();
  o.seed = seed;
  const NoiseMapResult r = noise_map(o);
  const std::vector<std::string> cols = {"infidelity_physical", "ci_physical", "infidelity_logical", "ci_logical",
                                         "combined_ci"};
  auto block = [&](const std::string& id, const std::string& title, const std::string& level,
                   const std::vector<NoiseMapPoint>& pts) {
    Table t{title, {level}};
    t.columns.insert(t.columns.end(), cols.begin(), cols.end());
    for (const auto& pt : pts) {
      t.add({pt.level, pt.physical.mean, pt.physical.ci_half_width, pt.logical.mean, pt.logical.ci_half_width,
             pt.combined_ci()});
    }
    out.figure(id, t);
  };
  block("figS11a", "infidelity under heater voltage noise", "sigma_v", r.voltage);
  block("figS11b", "infidelity under source distinguishability", "epsilon", r.distinguishability);
  bool ordered = true, equal = true;
  for (const auto& pt : r.voltage) ordered = ordered && pt.logical.mean <= pt.physical.mean;
  // Without noise both infidelities vanish and the interval is empty.
  for (const auto& pt : r.distinguishability) {
    equal = equal && (pt.level == 0.0 ? std::abs(pt.delta()) < 1e-12 : std::abs(pt.delta()) < pt.combined_ci());
  }
  out.summary["voltage_logical_not_worse"] = ordered;
  out.summary["distinguishability_within_ci"] = equal;
  out.summary["trials"] = o.trials;
}

void run_explore(const json& p, std::uint64_t seed, Sink& out) {
  const std::string rules_name = p.at("ruleset").get<std::string>();
  DeviceRuleset rules;
  if (rules_name == "device") {
    rules = DeviceRuleset::device();
  } else if (rules_name == "qubit_baseline") {
    rules = DeviceRuleset::qubit_baseline();
  } else {
    throw Error("unknown ruleset '" + rules_name + "' (device, qubit_baseline)");
  }
  CountingConvention conv;
  conv.min_vertices = p.at("min_vertices").get<int>();
  conv.mode = p.at("components").get<bool>() ? CountingConvention::Mode::Components : CountingConvention::Mode::Whole;
  const std::string mode = p.at("mode").get<std::string>();
  ExploreResult r;
  if (mode == "exhaustive") {
    r = explore_exhaustive(rules, conv);
  } else if (mode == "random") {
    ExploreOptions o;
    o.budget = p.at("budget").get<long long>();
    o.seed = seed;
    o.walk_length = p.at("walk_length").get<int>();
    o.delete_weight = p.at("delete_weight").get<double>();
    o.saturation_window = p.at("saturation_window").get<long long>();
    o.convention = conv;
    r = explore(rules, o);
  } else {
    throw Error("unknown mode '" + mode + "' (exhaustive, random)");
  }
  Table t{"graph-state classes reached", {"class", "vertices", "edges", "members", "reached", "recipe"}};
  for (const auto& [id, c] : r.classes) {
    std::string recipe;
    for (const auto& op : c.recipe) recipe += (recipe.empty() ? "" : " ") + op.str();
    t.add({id.str(), id.n, c.representative.graph().edges().size(), c.members, c.reached, recipe});
  }
  out.figure("figS12", t);
  out.summary = {{"classes", r.classes.size()},   {"graphs_reached", r.graphs_reached},
                 {"graphs_in_classes", r.graphs_in_classes}, {"labelled_states", r.labelled_states},
                 {"steps", r.steps},              {"saturated", r.saturated}};
}

void run_rates(const json& p, std::uint64_t, Sink& out) {
  const std::string preset = p.at("preset").get<std::string>();
  RateParams rp;
  if (preset == "low_loss") {
    rp = RateParams::low_loss();
  } else if (preset != "default") {
    throw Error("unknown preset '" + preset + "' (default, low_loss)");
  }
  auto maybe = [&](const char* key, double& field) {
    if (!p.at(key).is_null()) field = p.at(key).get<double>();
  };
  maybe("s", rp.s);
  maybe("rep_rate", rp.rep_rate);
  maybe("p_fuse", rp.p_fuse);
  maybe("eta", rp.eta);
  maybe("collection", rp.collection);
  rp.d_max = p.at("d_max").get<int>();
  rp.photon_max = p.at("photon_max").get<int>();
  const auto table = compare_encodings(p.at("n_min").get<int>(), p.at("n_max").get<int>(), rp);

  Table t{"GHZ generation rates, qubit and best qudit encoding", {"n", "qubit_rate", "qudit_rate", "d_opt"}};
  Table d{"rate factors", {"n", "encoding", "d", "photons", "rate_hz", "rep_rate", "source", "fusion", "collection",
                           "mesh"}};
  auto detail = [&](const GhzRate& r) {
    json row = {r.n, r.encoding.str(), r.d, r.photons, r.rate_hz};
    for (const auto& f : r.factors) row.push_back(f.value);
    d.add(row);
  };
  for (const auto& c : table) {
    t.add({c.n, c.qubit.rate_hz, c.qudit_feasible ? json(c.best_qudit.rate_hz) : json(nullptr),
           c.qudit_feasible ? json(c.best_qudit.d) : json(nullptr)});
    detail(c.qubit);
    if (c.qudit_feasible) detail(c.best_qudit);
  }
  out.figure("figS13", t);
  out.figure("rates", d);
  out.summary["params"] = {{"s", rp.s},     {"rep_rate", rp.rep_rate},         {"p_fuse", rp.p_fuse},
                           {"eta", rp.eta}, {"collection", rp.collection},     {"d_max", rp.d_max},
                           {"photon_max", rp.photon_max}};
}

void run_hypergraph(const json&, std::uint64_t, Sink& out) {
  const Recipe clover = named_recipe("clover");
  const QubitState psi = run_recipe(clover);
  const Hypergraph g = *clover.target;
  Table t{"Z measurements on the clover state", {"case", "measured", "outcomes", "result", "fidelity"}};
  auto apply_byproducts = [](const ZMeasureResult& r) {
    QubitState s = r.post;
    for (int u : r.z_byproducts) s = apply_unitary(s, gates::Z(), {u});
    return s;
  };
  // Vertices are 1-based in the report; 5 is the centre.
  const auto zero = z_measure_vertex(psi, g, 4, 0);
  t.add({"centre", "5", "0", "(1-2)(3-4)",
         fidelity(apply_byproducts(zero), build_state(Hypergraph(4, {{0, 1}, {2, 3}})))});
  const auto one = z_measure_vertex(psi, g, 4, 1);
  t.add({"centre", "5", "1", "(1-4)(3-2)",
         fidelity(apply_byproducts(one), build_state(Hypergraph(4, {{0, 3}, {1, 2}})))});
  const auto a = z_measure_vertex(psi, g, 0, 0);
  const auto b = z_measure_vertex(apply_byproducts(a), a.residual, 2, 0);
  t.add({"outer", "1,4", "0,0", "toffoli", fidelity(apply_byproducts(b), build_state(Hypergraph(3, {{0, 1, 2}})))});
  const auto c = z_measure_vertex(psi, g, 0, 1);
  const auto d = z_measure_vertex(apply_byproducts(c), c.residual, 0, 1);
  t.add({"outer", "1,2", "1,1", "fully connected toffoli",
         fidelity(apply_byproducts(d), build_state(Hypergraph(3, {{0, 1, 2}, {0, 1}, {0, 2}, {1, 2}})))});
  out.figure("fig5", t);

  Table s{"hypergraph states: generators", {"state", "qubits", "generators", "min_generator"}};
  for (const std::string name : {"clover", "toffoli", "fc_toffoli", "hyper8"}) {
    const Recipe r = named_recipe(name);
    const QubitState st = run_recipe(r);
    double lo = 1e300;
    const auto gens = stabilizer_generators(*r.target);
    for (const auto& k : gens) lo = std::min(lo, expectation(st, k).real());
    s.add({name, st.num_qubits(), gens.size(), lo});
  }
  out.figure("hypergraph_states", s);
}

// ------------------------------------------------------------- catalog

const std::vector<std::string> kZooStates = {"star4", "star8", "L3",     "L4",   "L5",    "box4",    "B3",
                                             "B5",    "B7",    "B8",    "crazy6", "ghz8", "clover", "toffoli", "fc_toffoli"};

const std::vector<Experiment>& experiments() {
  static const std::vector<Experiment> kList = {
      {{"state-fidelity",
        "direct fidelity of the four-qudit state and its measurement plan",
        {"fig1c", "plan"},
        {{"perturbed", "integer", 20, "random admixtures checked against the direct overlap"},
         {"max_weight", "number", 0.5, "largest admixture weight"},
         {"distinguishability", "number", 0.0, "incoherent weight at both fusion gates for the chip state"}}},
       run_state_fidelity},
      {{"graph-zoo",
        "named device states: generator expectations and fidelity to the target",
        {"fig2"},
        {{"states", "strings", kZooStates, "named states"},
         {"shots", "integer", 0, "shots per Pauli generator; 0 for exact values"}}},
       run_graph_zoo},
      {{"mbqc-gates",
        "measurement-based single-qubit gates: process fidelities and input encoding",
        {"tableS9", "tableS10", "tableS11"},
        {}},
       run_mbqc_gates},
      {{"teleport-sweep",
        "teleportation through branched codes under dephasing",
        {"teleport", "fig3d"},
        {{"p_step", "number", 0.05, "grid step on [0, 1]"},
         {"codes", "strings", json::array({"B3", "B5", "B7"}), "B3, B5, B7, crazy6"},
         {"modes", "strings", json::array({"one", "two", "all"}), "dephased middle qubits: one, two, all"},
         {"method", "string", "analytic", "analytic, density, sampled, detuned"},
         {"ties", "string", "fail", "majority ties: fail or half"},
         {"input", "string", "+i", "0, 1, +, -, +i, -i"},
         {"shots", "integer", 10000, "sampled method only"}}},
       run_teleport_sweep},
      {{"loss-sweep",
        "B7 teleportation with a lost middle photon",
        {"figS14"},
        {{"p", "numbers", json::array({0.0, 0.2, 0.4}), "dephasing probabilities"},
         {"photons", "integers", json::array({0, 2, 3}), "lost photon: 0 = A, 2 = C, 3 = D"},
         {"method", "string", "density", "analytic or density"},
         {"ties", "string", "fail", "fail or half"},
         {"input", "string", "-i", "0, 1, +, -, +i, -i"}}},
       run_loss_sweep},
      {{"pea",
        "iterative phase estimation, physical and logical encodings",
        {"fig4c", "pea_bits"},
        {{"bits", "integer", 3, "phase bits"},
         {"samples", "integer", 17, "runs per bit"},
         {"dephasing", "number", 0.0, "Z flip probability on the central layer"},
         {"exact", "bool", false, "decide from exact probabilities"},
         {"bootstrap_rounds", "integer", 10000, "rounds for the confidence estimate"}}},
       run_pea},
      {{"noise-map",
        "chip-level infidelity of line gates under voltage noise and distinguishability",
        {"figS11a", "figS11b"},
        {{"sigma_v", "numbers", NoiseMapOptions{}.sigma_v, "voltage noise sweep (V)"},
         {"epsilon", "numbers", NoiseMapOptions{}.epsilon, "distinguishability sweep"},
         {"trials", "integer", 500, "trials per point"}}},
       run_noise_map},
      {{"explore",
        "graph-state classes reachable on the device",
        {"figS12"},
        {{"ruleset", "string", "device", "device or qubit_baseline"},
         {"mode", "string", "exhaustive", "exhaustive or random"},
         {"budget", "integer", 1000000, "random walk steps"},
         {"walk_length", "integer", 64, "steps per walk"},
         {"delete_weight", "number", 0.05, "relative weight of deletions"},
         {"saturation_window", "integer", 100000, "stop after this many steps without a new graph"},
         {"min_vertices", "integer", 2, "smallest counted graph"},
         {"components", "bool", false, "count connected components separately"}}},
       run_explore},
      {{"rates",
        "GHZ generation rates for qubit and qudit encodings",
        {"figS13", "rates"},
        {{"preset", "string", "default", "default or low_loss"},
         {"n_min", "integer", 2, "smallest GHZ size"},
         {"n_max", "integer", 40, "largest GHZ size"},
         {"s", "number", nullptr, "pair probability (preset when null)"},
         {"rep_rate", "number", nullptr, "Hz"},
         {"p_fuse", "number", nullptr, "fusion success probability"},
         {"eta", "number", nullptr, "MZI transmission"},
         {"collection", "number", nullptr, "per-photon collection efficiency"},
         {"d_max", "integer", 16, "largest qudit dimension"},
         {"photon_max", "integer", 10, "photon cap for qudit schemes"}}},
       run_rates},
      {{"hypergraph",
        "Z measurements on the clover hypergraph state",
        {"fig5", "hypergraph_states"},
        {}},
       run_hypergraph},
  };
  return kList;
}

const Experiment& find_experiment(const std::string& name) {
  for (const auto& e : experiments()) {
    if (e.info.name == name) return e;
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

bool type_matches(const std::string& type, const json& v, bool nullable) {
  if (v.is_null()) return nullable;
  if (type == "number") return v.is_number();
  if (type == "integer") return v.is_number_integer();
  if (type == "bool") return v.is_boolean();
  if (type == "string") return v.is_string();
  if (type == "numbers" || type == "strings" || type == "integers") {
    if (!v.is_array()) return false;
    for (const auto& x : v) {
      if (type == "numbers" && !x.is_number()) return false;
      if (type == "strings" && !x.is_string()) return false;
      if (type == "integers" && !x.is_number_integer()) return false;
    }
    return true;
  }
  return false;
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_catalog() {
  static const std::vector<ExperimentInfo> kInfo = [] {
    std::vector<ExperimentInfo> out;
    for (const auto& e : experiments()) out.push_back(e.info);
    return out;
  }();
  return kInfo;
}

json resolve_params(const std::string& experiment, const json& params) {
  const Experiment& e = find_experiment(experiment);
  if (!params.is_object()) throw ConfigError("params must be an object");
  json out = json::object();
  std::set<std::string> known;
  for (const auto& param : e.info.params) {
    known.insert(param.key);
    const bool nullable = param.default_value.is_null();
    if (params.contains(param.key)) {
      const json& v = params.at(param.key);
      if (!type_matches(param.type, v, nullable)) {
        throw ConfigError("parameter '" + param.key + "' of " + experiment + " must be of type " + param.type);
      }
      out[param.key] = v;
    } else {
      out[param.key] = param.default_value;
    }
  }
  for (const auto& [k, v] : params.items()) {
    if (!known.count(k)) throw ConfigError("unknown parameter '" + k + "' for " + experiment);
  }
  return out;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> kKeys = {"experiment", "seed", "params", "output"};
  for (const auto& [k, v] : j.items()) {
    if (!kKeys.count(k)) throw ConfigError("unknown config key '" + k + "'");
  }
  ExperimentConfig c;
  if (!j.contains("experiment") || !j.at("experiment").is_string()) {
    throw ConfigError("config needs a string 'experiment'");
  }
  c.experiment = j.at("experiment").get<std::string>();
  find_experiment(c.experiment);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("params")) c.params = j.at("params");
  resolve_params(c.experiment, c.params);
  if (j.contains("output")) {
    const json& o = j.at("output");
    if (!o.is_object()) throw ConfigError("output must be an object");
    for (const auto& [k, v] : o.items()) {
      if ((k != "report" && k != "csv_dir") || !v.is_string()) {
        throw ConfigError("output accepts string 'report' and 'csv_dir' only");
      }
    }
    c.report_path = o.value("report", "");
    c.csv_dir = o.value("csv_dir", "");
  }
  return c;
}

ExperimentReport run_experiment(const ExperimentConfig& config, std::optional<std::uint64_t> seed_override) {
  const Experiment& e = find_experiment(config.experiment);
  const json params = resolve_params(config.experiment, config.params);
  const std::uint64_t seed = seed_override ? *seed_override : config.seed.value_or(kDefaultSeed);

  ExperimentReport r;
  r.json["artifact"] = {{"name", "qgraph"}, {"version", artifact_version()}};
  r.json["experiment"] = config.experiment;
  r.json["seed"] = seed;
  r.json["config"] = {{"experiment", config.experiment}, {"seed", seed}, {"params", params}};
  Sink sink;
  try {
    e.run(params, seed, sink);
    r.json["status"] = "ok";
  } catch (const std::exception& ex) {
    r.json["status"] = "error";
    r.json["error"] = {{"message", ex.what()}};
  }
  r.json["figures"] = sink.figures;
  r.json["summary"] = sink.summary;
  return r;
}

std::string emit_plot_data(const json& report, const std::string& figure) {
  if (!report.contains("figures") || !report.at("figures").contains(figure)) {
    throw Error("report has no figure block '" + figure + "'");
  }
  const json& block = report.at("figures").at(figure);
  std::ostringstream os;
  auto cell = [&](const json& v) {
    if (v.is_null()) return;
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      if (s.find_first_of(",\"\n") == std::string::npos) {
        os << s;
      } else {
        os << '"';
        for (char ch : s) os << (ch == '"' ? "\"\"" : std::string(1, ch));
        os << '"';
      }
    } else if (v.is_boolean()) {
      os << (v.get<bool>() ? 1 : 0);
    } else if (v.is_number_integer()) {
      os << v.dump();
    } else if (v.is_number()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
      os << buf;
    } else {
      throw Error("unsupported cell in figure " + figure);
    }
  };
  const json& cols = block.at("columns");
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) os << ',';
    cell(cols[i]);
  }
  os << '\n';
  for (const auto& row : block.at("rows")) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      cell(row[i]);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace qg
