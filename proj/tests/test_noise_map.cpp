// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "qgraph/noise_map.hpp"

using namespace qg;

namespace {

std::array<double, 3> bloch(const Vec& psi) {
  const Vec v = psi.normalized();
  const cplx c = std::conj(v(0)) * v(1);
  return {2 * c.real(), 2 * c.imag(), std::norm(v(0)) - std::norm(v(1))};
}

}  // namespace

TEST_CASE("noiseless chip runs reproduce the gate on every cardinal input") {
  const std::vector<std::string> gates = {"I", "X", "RX(pi/2)", "RX(-pi/2)"};
  const auto inputs = cardinal_states();
  for (Encoding enc : {Encoding::Physical, Encoding::Logical}) {
    const ChipLineExperiment e(enc);
    REQUIRE(e.settings() == 24);
    CHECK(e.chip_settings() == 72);
    std::mt19937_64 rng(1);
    std::size_t i = 0;
    for (const auto& in : inputs) {
      for (const auto& g : gates) {
        // Oracle: the line teleports RX(alpha) psi, and RX(alpha) matches the named gate up to phase.
        const auto want = bloch(named_gate(g) * in);
        const auto ideal = e.ideal_bloch(i);
        const auto chip = e.chip_bloch(i, 0.0, false, false, rng);
        for (int k = 0; k < 3; ++k) {
          CHECK(ideal[k] == doctest::Approx(want[k]).epsilon(1e-9));
          CHECK(chip[k] == doctest::Approx(want[k]).epsilon(1e-9));
        }
        ++i;
      }
    }
    CHECK(e.mean_fidelity(0.0, false, false, rng) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("distinguishable photons at the B-C gate affect both encodings equally") {
  const ChipLineExperiment p(Encoding::Physical), l(Encoding::Logical);
  std::mt19937_64 rng(2);
  const double fp = p.mean_fidelity(0.0, true, false, rng);
  const double fl = l.mean_fidelity(0.0, true, false, rng);
  CHECK(fp == doctest::Approx(fl).epsilon(1e-12));
  CHECK(fp == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  // The A-D gate is the identity on the GHZ configuration.
  CHECK(p.mean_fidelity(0.0, false, true, rng) == doctest::Approx(1.0).epsilon(1e-12));

  NoiseConfig n;
  n.epsilon = 0.3;
  n.trials = 200;
  n.seed = 4;
  const TrialStats a = run_noisy_trials(ChipConfig::ghz(4), p.experiment(), n, true);
  const TrialStats b = run_noisy_trials(ChipConfig::ghz(4), l.experiment(), n, true);
  for (int t = 0; t < n.trials; ++t) CHECK(a.values[t] == doctest::Approx(b.values[t]).epsilon(1e-12));
  CHECK(a.mean > 0.0);
  CHECK(a.ci_half_width > 0.0);
}

TEST_CASE("voltage noise: logical infidelity below physical, deterministic per seed") {
  NoiseMapOptions o;
  o.sigma_v = {0.0, 0.05};
  o.epsilon = {};
  o.trials = 100;
  o.seed = 9;
  const NoiseMapResult r = noise_map(o);
  REQUIRE(r.voltage.size() == 2);
  CHECK(r.voltage[0].physical.mean == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.voltage[0].physical.ci_half_width == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.voltage[1].physical.mean > 0.0);
  CHECK(r.voltage[1].logical.mean <= r.voltage[1].physical.mean);
  o.threads = 3;
  CHECK(noise_map(o).to_json() == r.to_json());
}
