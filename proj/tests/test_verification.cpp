// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "helpers.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/named.hpp"
#include "qgraph/verification.hpp"

using namespace qg;

namespace {

std::string fill_identity(std::string s) {
  std::replace(s.begin(), s.end(), 'I', 'Z');
  return s;
}

std::vector<std::pair<PauliString, double>> group_expectations(const Hypergraph& g, const DensityOperator& rho) {
  std::vector<std::pair<PauliString, double>> out;
  for (const auto& p : stabilizer_group(g)) out.emplace_back(p, pauli_expectation(rho, p));
  return out;
}

DensityOperator noisy(const QubitState& psi, double keep, std::mt19937_64& rng) {
  return DensityOperator::mixture({keep, 1 - keep},
                                  {DensityOperator(psi), testing::random_density(psi.num_qubits(), 3, rng)});
}

}  // namespace

TEST_CASE("setting XZXZX derives the published line stabilizers") {
  auto s = MeasurementSetting::from_pauli("XZXZX");
  for (const char* p : {"IZXZI", "XZIII", "IIIZX", "XIXZI", "IZXIX", "XZIZX", "XIXIX", "IIIII"}) {
    CHECK(s.derives(PauliString::parse(p)));
  }
  CHECK_FALSE(s.derives(PauliString::parse("ZXZII")));
}

TEST_CASE("compile a single stabilizer") {
  auto plan = compile_settings({PauliString::parse("XZZY")});
  REQUIRE(plan.settings.size() == 1);
  CHECK(plan.settings[0].to_string() == "XZZY");
}

TEST_CASE("line5 group: published plan has 17 settings and greedy does no worse than trivial") {
  auto g = *named_recipe("L5").target;
  auto group = stabilizer_group(g);
  REQUIRE(group.size() == 32);

  std::vector<MeasurementSetting> table;
  for (const auto& s : fixtures::line5_settings()) table.push_back(MeasurementSetting::from_pauli(fill_identity(s)));
  auto fixed = derive_from(table, group);
  CHECK(fixed.settings.size() == 17);

  auto greedy = compile_settings(group);
  CHECK(greedy.settings.size() <= group.size());
  std::size_t derived = 0;
  for (std::size_t i = 0; i < greedy.settings.size(); ++i) {
    for (auto s : greedy.derivations[i]) {
      ++derived;
      // Letter rule, checked directly.
      const auto set = greedy.settings[i].to_string();
      const auto letters = group[s].letters_string();
      for (std::size_t q = 0; q < letters.size(); ++q) CHECK((letters[q] == 'I' || letters[q] == set[q]));
    }
  }
  CHECK(derived == group.size());
  MESSAGE("greedy settings for L5: " << greedy.settings.size());
}

TEST_CASE("compiled derivations are sound on random graphs") {
  std::mt19937_64 rng(2);
  for (int n = 2; n <= 6; ++n) {
    Hypergraph g(n);
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (rng() % 2) g.toggle_edge({u, v});
      }
    }
    auto group = stabilizer_group(g);
    auto plan = compile_settings(group);
    for (std::size_t i = 0; i < plan.settings.size(); ++i) {
      for (auto s : plan.derivations[i]) CHECK(plan.settings[i].derives(group[s]));
    }
  }
}

TEST_CASE("Bell setting derives XX, YY and ZZ within a qudit") {
  auto s = MeasurementSetting::from_pauli("ZZXX").with_bell_pair(0);
  CHECK(s.to_string() == "[B]XX");
  CHECK(s.derives(PauliString::parse("XXXI")));
  CHECK(s.derives(PauliString::parse("-YYIX")));
  CHECK(s.derives(PauliString::parse("ZZII")));
  CHECK_FALSE(s.derives(PauliString::parse("XIII")));
  CHECK_FALSE(s.derives(PauliString::parse("XYII")));
  CHECK_THROWS_AS(MeasurementSetting(2, {LocalBasis{LocalBasis::Kind::Bell, {1, 2}}}), Error);
  // Exact expectation read back from the Bell-basis distribution.
  auto psi = named_state("star4");
  auto probs = s.probabilities(psi);
  for (const char* p : {"YYZZ", "-YYYY", "ZXXX"}) {
    auto pp = PauliString::parse(p);
    if (!s.derives(pp)) continue;
    double v = 0.0;
    for (std::size_t o = 0; o < probs.size(); ++o) v += probs[o] * s.eigenvalue(pp, o);
    CHECK(v == doctest::Approx(pauli_expectation(psi, pp)).epsilon(1e-12));
  }
}

TEST_CASE("full-group and generator estimates") {
  auto g = star_graph(4);
  auto ideal = group_expectations(g, DensityOperator(build_state(g)));
  CHECK(full_group_fidelity(ideal) == doctest::Approx(1).epsilon(1e-12));
  auto mixed = group_expectations(g, DensityOperator::maximally_mixed(4));
  CHECK(full_group_fidelity(mixed) == doctest::Approx(1.0 / 16).epsilon(1e-12));
  CHECK(generator_mean({0.80, 0.81, 0.82, 0.79, 0.83}) == doctest::Approx(0.81).epsilon(1e-12));
  ideal.pop_back();
  CHECK_THROWS_AS(full_group_fidelity(ideal), Error);
  CHECK_THROWS_AS(generator_mean({}), Error);
}

TEST_CASE("full-group estimate equals direct fidelity on noisy named states") {
  std::mt19937_64 rng(21);
  for (const char* name : {"star4", "L3", "L4", "L5", "box4", "B3", "B5", "crazy6"}) {
    CAPTURE(name);
    auto r = named_recipe(name);
    auto psi = build_state(*r.target);
    for (int k = 0; k < 50; ++k) {
      auto rho = noisy(psi, std::uniform_real_distribution<double>(0, 1)(rng), rng);
      CHECK(full_group_fidelity(group_expectations(*r.target, rho)) ==
            doctest::Approx(fidelity(rho, psi)).epsilon(1e-9));
    }
  }
}

TEST_CASE("equatorial protocol") {
  auto ghz = ghz_state(8);
  auto d = theta_data(DensityOperator(ghz));
  CHECK(d.population == doctest::Approx(1).epsilon(1e-12));
  for (int k = 0; k < 8; ++k) CHECK(d.coherence[static_cast<std::size_t>(k)] == doctest::Approx(k % 2 ? -1 : 1).epsilon(1e-9));
  CHECK(theta_fidelity(d, 8) == doctest::Approx(1).epsilon(1e-9));
  CHECK_THROWS_AS(theta_fidelity(1.0, {1, 1, 1}, 8), Error);

  // Damped coherence.
  for (double lambda : {0.0, 0.3, 0.77, 1.0}) {
    Mat m = DensityOperator(ghz).matrix();
    m(0, 255) *= lambda;
    m(255, 0) *= lambda;
    DensityOperator rho(8, m);
    CHECK(theta_fidelity(theta_data(rho), 8) == doctest::Approx((1 + lambda) / 2).epsilon(1e-9));
  }

  // Analytic family: GHZ-diagonal populations plus arbitrary coherences.
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    Mat m = testing::random_density(4, 4, rng).matrix();
    DensityOperator rho(4, m);
    CHECK(theta_fidelity(theta_data(rho), 4) == doctest::Approx(fidelity(rho, ghz_state(4))).epsilon(1e-9));
  }

  // Noisy star8: undo H on 2..8 and run the protocol.
  auto star = build_state(star_graph(8));
  auto rho = noisy(star, 0.7, rng);
  for (int q = 1; q < 8; ++q) rho = apply_unitary(rho, gates::H(), {q});
  auto direct = fidelity(rho, ghz);
  CHECK(std::abs(theta_fidelity(theta_data(rho), 8) - direct) < 0.01);
}

TEST_CASE("four-qudit off-diagonal plan") {
  auto plan = offdiag_plan(four_p_four_d_target());
  CHECK(plan.terms.size() == 28);
  CHECK(plan.pairs_by_size.at(4) == 20);
  CHECK(plan.pairs_by_size.at(2) == 8);
  CHECK(plan.projectors == 5600);
  CHECK(plan.naive_projectors == 11904);
  CHECK(plan.diagonal_projectors == 256);
  // <0000| rho |3300>: kets 0 and 6 in the target list.
  auto it = std::find_if(plan.terms.begin(), plan.terms.end(), [](const OffDiagTerm& t) { return t.k == 6 && t.l == 0; });
  REQUIRE(it != plan.terms.end());
  CHECK(it->qudits == std::vector<int>{0, 1});
  CHECK(it->modes == std::vector<std::pair<int, int>>{{3, 0}, {3, 0}});
  CHECK(it->settings == 5);

  auto bad = four_p_four_d_target();
  bad.coefficients[0] *= 2.0;
  CHECK_THROWS_AS(offdiag_plan(bad), Error);
}

TEST_CASE("four-qudit direct fidelity") {
  auto target = four_p_four_d_target();
  auto ideal = four_p_four_d_state();
  auto r = direct_fidelity_offdiag(DensityOperator(ideal), target);
  CHECK(r.fidelity == doctest::Approx(1).epsilon(1e-9));
  for (const auto& t : r.terms) {
    const auto expect = target.coefficients[t.l] * std::conj(target.coefficients[t.k]);
    CHECK(std::abs(t.value - expect) < 1e-9);
  }

  std::mt19937_64 rng(4);
  std::vector<Eigen::Index> support;
  for (const auto& k : target.kets) support.push_back((k[0] << 6) | (k[1] << 4) | (k[2] << 2) | k[3]);
  for (int trial = 0; trial < 20; ++trial) {
    Mat a = testing::random_density(3, 8, rng).matrix();
    Mat m = Mat::Zero(256, 256);
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) m(support[static_cast<std::size_t>(i)], support[static_cast<std::size_t>(j)]) = a(i, j);
    }
    const double eta = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    auto rho = DensityOperator::mixture({0.5, 0.5 - eta, eta},
                                        {DensityOperator(ideal), DensityOperator(8, m), testing::random_density(8, 2, rng)});
    CHECK(direct_fidelity_offdiag(rho, target).fidelity == doctest::Approx(fidelity(rho, ideal)).epsilon(1e-9));
  }
}

TEST_CASE("simulated counts") {
  auto psi = named_state("L3");
  auto setting = MeasurementSetting::from_pauli("XZY");
  auto exact = setting.probabilities(psi);
  auto rec = simulate_counts(psi, setting, 1000000, 17);
  long long total = 0;
  for (std::size_t o = 0; o < exact.size(); ++o) {
    total += rec.counts[o];
    CHECK(std::abs(static_cast<double>(rec.counts[o]) / 1e6 - exact[o]) < 0.005);
  }
  CHECK(total == 1000000);

  auto again = simulate_counts(psi, setting, 1000000, 17);
  CHECK(again.counts == rec.counts);
  CHECK_THROWS_AS(simulate_counts(psi, setting, 0, 1), Error);

  auto round = CountsRecord::from_json(nlohmann::json::parse(rec.to_json().dump()));
  CHECK(round.counts == rec.counts);
  CHECK(round.setting.to_string() == "XZY");

  auto p = PauliString::parse("XZI");
  CHECK(estimate_expectation(setting, rec.counts, p) == doctest::Approx(1).epsilon(1e-12));
}

TEST_CASE("bootstrap on a deterministic outcome") {
  // Z on |0>: every shot lands in bin 0.
  auto setting = MeasurementSetting::from_pauli("Z");
  Statistic raw = [](const std::vector<long long>& c) { return static_cast<double>(c[0]); };
  double previous = 1.0;
  for (long long shots : {100LL, 10000LL, 1000000LL}) {
    auto rec = simulate_counts(QubitState(1), setting, shots, 3);
    CHECK(rec.counts[0] == shots);
    auto e = bootstrap_errorbar(rec, raw, 500, 9);
    const double rel = e.std_error / e.mean;
    CHECK(rel < 0.2);
    CHECK(rel < previous);
    previous = rel;
  }
  auto rec = simulate_counts(QubitState(1), setting, 1000, 3);
  auto z = [&](const std::vector<long long>& c) { return estimate_expectation(setting, c, PauliString::parse("Z")); };
  auto e = bootstrap_errorbar(rec, z, 200, 1);
  CHECK(e.mean == doctest::Approx(1));
  CHECK(e.std_error < 1e-12);
}

TEST_CASE("counts for many settings do not depend on the thread count") {
  auto rho = DensityOperator(named_state("star4"));
  std::vector<MeasurementSetting> settings;
  for (const char* s : {"XZZZ", "ZXXX", "YYZZ", "YZYZ"}) settings.push_back(MeasurementSetting::from_pauli(s));
  auto one = simulate_all(rho, settings, 5000, 99, 1);
  auto four = simulate_all(rho, settings, 5000, 99, 4);
  for (std::size_t i = 0; i < settings.size(); ++i) CHECK(one[i].counts == four[i].counts);
}
