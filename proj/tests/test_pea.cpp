// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "qgraph/pea.hpp"

using namespace qg;

TEST_CASE("bit probability examples") {
  CHECK(bit_probability(1, 0.5, 0.0) == doctest::Approx(0.0));
  CHECK(bit_probability(4, 0.125, 0.0) == doctest::Approx(0.0));
  CHECK(bit_probability(1, 0.0, 0.0) == doctest::Approx(1.0));
  CHECK(bit_probability(2, 0.375, 0.25) == doctest::Approx(0.0));
  CHECK_THROWS_AS(bit_probability(0, 0.1, 0.0), Error);
}

TEST_CASE("noiseless phase estimation recovers every three-bit phase") {
  int correct = 0;
  for (int k = 0; k < 8; ++k) {
    const double phi0 = k / 8.0;
    for (auto enc : {PeaEncoding::Physical, PeaEncoding::Logical}) {
      PeaOptions o;
      o.encoding = enc;
      o.seed = 100 + k;
      const PeaRun r = pea_run(phi0, o);
      CHECK(r.estimate == doctest::Approx(phi0));
      REQUIRE(r.bits.size() == 3);
      CHECK(r.bits[0].index == 3);  // least significant first
      for (const auto& b : r.bits) {
        CHECK((b.p1 == 0.0 || b.p1 == 1.0));
        CHECK(std::abs(b.p1 - b.p1_exact) < 1e-9);
        CHECK(std::abs(b.p1_exact - b.p1_ideal) < 1e-9);
        if (enc == PeaEncoding::Physical) correct += b.correct();
      }
      o.exact = true;
      const PeaRun e = pea_run(phi0, o);
      CHECK(e.estimate == doctest::Approx(phi0));
    }
  }
  CHECK(correct == 24);
}

TEST_CASE("schedule: multipliers and feedback phases") {
  PeaOptions o;
  o.exact = true;
  const PeaRun r = pea_run(0.625, o);  // 0.101
  CHECK(r.bits[0].multiplier == 4);
  CHECK(r.bits[0].theta == 0.0);
  CHECK(r.bits[1].multiplier == 2);
  CHECK(r.bits[1].theta == doctest::Approx(0.25));
  CHECK(r.bits[2].multiplier == 1);
  CHECK(r.bits[2].theta == doctest::Approx(0.125));
  CHECK(r.to_json()["per_bit"].size() == 3);
}

TEST_CASE("sampled P(1) tracks the exact value for off-grid phases") {
  PeaOptions o;
  o.samples = 401;
  o.seed = 7;
  const PeaRun r = pea_run(0.3, o);
  for (const auto& b : r.bits) {
    CHECK(std::abs(b.p1 - b.p1_exact) < 3.0 / std::sqrt(401.0));
    CHECK(b.attempts >= b.samples);
  }
  // Same seed, same run.
  CHECK(pea_run(0.3, o).to_json() == r.to_json());
}

TEST_CASE("logical encoding resists central-layer dephasing") {
  double dev_phys = 0.0, dev_log = 0.0;
  int discarded_more = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    for (int k = 0; k < 8; ++k) {
      PeaOptions o;
      o.noise.dephasing = 0.1;
      o.seed = seed * 31 + k;
      o.encoding = PeaEncoding::Physical;
      const PeaRun p = pea_run(k / 8.0, o);
      o.encoding = PeaEncoding::Logical;
      const PeaRun l = pea_run(k / 8.0, o);
      for (int b = 0; b < 3; ++b) {
        dev_phys += std::abs(p.bits[b].p1 - p.bits[b].p1_ideal);
        dev_log += std::abs(l.bits[b].p1 - l.bits[b].p1_ideal);
        discarded_more += l.bits[b].attempts > p.bits[b].attempts;
      }
    }
  }
  CHECK(dev_log < dev_phys);
  CHECK(discarded_more > 0);
  // Exact conditional values: physical error p, logical p^2 / (p^2 + (1-p)^2).
  PeaOptions o;
  o.exact = true;
  o.noise.dephasing = 0.1;
  // phi0 = 0.001: the middle bit has a nonzero feedback phase, so a flipped
  // central outcome flips the readout.
  const PeaRun p = pea_run(0.125, o);
  o.encoding = PeaEncoding::Logical;
  const PeaRun l = pea_run(0.125, o);
  CHECK(std::abs(p.bits[1].p1_exact - p.bits[1].p1_ideal) == doctest::Approx(0.1));
  CHECK(std::abs(l.bits[1].p1_exact - l.bits[1].p1_ideal) == doctest::Approx(0.01 / 0.82));
}

TEST_CASE("bootstrap confidence") {
  std::vector<BitCounts> perfect(24, {17, 17}), wrong(24, {17, 0});
  CHECK(bootstrap_confidence(wrong, perfect, 1000, 1) == 1.0);
  CHECK(bootstrap_confidence(perfect, perfect, 1000, 1) == 0.0);
  std::vector<BitCounts> mid(24, {17, 9});
  CHECK(bootstrap_confidence(mid, mid, 10000, 2) <= 0.5);
  std::vector<BitCounts> logical(24, {17, 13}), physical(24, {17, 13});
  logical[0] = {17, 7};
  for (int i = 0; i < 9; ++i) physical[i] = {17, 7};
  const double w = bootstrap_confidence(physical, logical, 10000, 3);
  CHECK(w > 0.9);
  CHECK(std::abs(w - bootstrap_confidence(physical, logical, 10000, 4)) < 0.01);
  CHECK_THROWS_AS(bootstrap_confidence({}, {}, 10, 1), Error);
  CHECK_THROWS_AS(bootstrap_confidence({{0, 0}}, {{1, 1}}, 10, 1), Error);
}
