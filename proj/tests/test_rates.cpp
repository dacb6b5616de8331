// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include "doctest.h"
#include "qgraph/rates.hpp"

using namespace qg;

namespace {

// Closed form written out per scheme: photons, pairs and exponents by hand.
double oracle_rate(int n, int d, const RateParams& p) {
  const int k = static_cast<int>(std::lround(std::log2(d)));
  int photons = (n + k - 1) / k;
  if (photons % 2) ++photons;
  const int pairs = photons / 2;
  return p.rep_rate * std::pow(p.s, pairs) * std::pow(p.p_fuse, pairs - 1) *
         std::pow(p.collection * std::pow(p.eta, d - 1), photons);
}

}  // namespace

TEST_CASE("eight-qubit GHZ factors") {
  const RateParams p;
  const GhzRate q = ghz_rate(8, RateEncoding::qubit(), p);
  CHECK(q.pairs == 4);
  CHECK(q.fusions == 3);
  CHECK(q.factor("fusion") == 0.125);
  CHECK(q.factor("source") == doctest::Approx(std::pow(0.03, 4)));
  const GhzRate d4 = ghz_rate(8, RateEncoding::qudit(4), p);
  CHECK(d4.photons == 4);
  CHECK(d4.pairs == 2);
  CHECK(d4.factor("fusion") == 0.5);
  CHECK(d4.factor("source") == doctest::Approx(0.03 * 0.03));
  // Two qubits per photon halves the source exponent.
  CHECK(d4.factor("source") / q.factor("source") == doctest::Approx(1.0 / (0.03 * 0.03)));
}

TEST_CASE("single pair at unit transmission") {
  RateParams p;
  p.eta = 1.0;
  p.collection = 1.0;
  CHECK(ghz_rate(2, RateEncoding::qubit(), p).rate_hz == doctest::Approx(5e8 * 0.03));
  for (int d : {2, 4, 8, 16}) {
    CHECK(ghz_rate(2, RateEncoding::qudit(d), p).rate_hz == doctest::Approx(5e8 * 0.03));
  }
}

TEST_CASE("factors multiply back to the rate and match the closed form") {
  for (const RateParams& p : {RateParams{}, RateParams::low_loss()}) {
    for (int n = 2; n <= 40; ++n) {
      for (int d = 2; d <= 16; d *= 2) {
        const RateEncoding e = RateEncoding::qudit(d);
        if (!rate_feasible(n, e, p)) continue;
        const GhzRate r = ghz_rate(n, e, p);
        double prod = 1.0;
        for (const auto& f : r.factors) prod *= f.value;
        CHECK(prod == r.rate_hz);
        CHECK(r.rate_hz == doctest::Approx(oracle_rate(n, d, p)).epsilon(1e-12));
      }
      CHECK(ghz_rate(n, RateEncoding::qubit(), p).rate_hz == doctest::Approx(oracle_rate(n, 2, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("qudit formula at d = 2 reduces to the qubit formula") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(1e-3, 1.0);
  for (int t = 0; t < 1000; ++t) {
    RateParams p;
    p.s = u(rng);
    p.p_fuse = u(rng);
    p.eta = u(rng);
    p.collection = u(rng);
    p.rep_rate = 1e9 * u(rng);
    p.photon_max = 64;
    const int n = 2 + static_cast<int>(rng() % 40);
    const double a = ghz_rate(n, RateEncoding::qubit(), p).rate_hz;
    const double b = ghz_rate(n, RateEncoding::qudit(2), p).rate_hz;
    CHECK(std::abs(a - b) <= 1e-12 * a);
  }
}

TEST_CASE("best qudit scheme against qubits up to forty qubits") {
  for (const RateParams& p : {RateParams{}, RateParams::low_loss()}) {
    const auto table = compare_encodings(2, 40, p);
    REQUIRE(table.size() == 39);
    for (const auto& c : table) {
      REQUIRE(c.qudit_feasible);
      CHECK(c.best_qudit.rate_hz >= c.qubit.rate_hz);
      CHECK(c.best_qudit.photons <= 10);
    }
    CHECK(table.back().best_qudit.d == 16);
    CHECK(table.back().best_qudit.photons == 10);
  }
  CHECK_FALSE(rate_feasible(41, RateEncoding::qudit(16), RateParams{}));
  CHECK(rate_feasible(40, RateEncoding::qudit(16), RateParams{}));
  CHECK_FALSE(rate_feasible(12, RateEncoding::qudit(2), RateParams{}));
  // Eleven or more qubits need d >= 4 under the ten-photon cap.
  CHECK(compare_encodings(11, 11).front().best_qudit.d >= 4);
}

TEST_CASE("rates do not increase with n for a fixed encoding") {
  const RateParams p;
  for (int d = 2; d <= 16; d *= 2) {
    double prev = INFINITY;
    for (int n = 2; n <= 40; ++n) {
      const RateEncoding e = RateEncoding::qudit(d);
      if (!rate_feasible(n, e, p)) break;
      const double r = ghz_rate(n, e, p).rate_hz;
      CHECK(r <= prev);
      prev = r;
    }
  }
  double prev = INFINITY;
  for (int n = 2; n <= 40; ++n) {
    const double r = ghz_rate(n, RateEncoding::qubit(), p).rate_hz;
    CHECK(r <= prev);
    prev = r;
  }
}

TEST_CASE("invalid parameters and encodings") {
  RateParams p;
  CHECK_THROWS_AS(ghz_rate(50, RateEncoding::qudit(16), p), Error);
  CHECK_THROWS_AS(ghz_rate(8, RateEncoding::qudit(6), p), Error);
  CHECK_THROWS_AS(ghz_rate(8, RateEncoding::qudit(32), p), Error);
  CHECK_THROWS_AS(ghz_rate(1, RateEncoding::qubit(), p), Error);
  p.s = 0.0;
  CHECK_THROWS_AS(ghz_rate(4, RateEncoding::qubit(), p), Error);
  p = {};
  p.d_max = 12;
  CHECK_THROWS_AS(p.validate(), Error);
  const std::string csv = rates_csv(compare_encodings(2, 4));
  CHECK(csv.rfind("n,encoding,d,photons,rate_hz,", 0) == 0);
}
