// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "qgraph/mbqc.hpp"
#include "qgraph/named.hpp"

using namespace qg;

namespace {

// Overlap of two pure qubit states, global phase ignored.
double overlap(const Vec& a, const Vec& b) { return std::norm(a.normalized().dot(b.normalized())); }

// Process fidelity of a pattern family against the gate, via tomography.
double pattern_fidelity(const std::function<MeasurementPattern(const Vec&)>& make, const QubitState& resource,
                        const Mat& gate) {
  auto runner = [&](const Vec& in) {
    const MeasurementPattern p = make(in);
    return pattern_output_qubit(run_pattern(resource, p), p);
  };
  return process_fidelity(process_tomography(runner).chi, chi_of_unitary(gate));
}

double binom_tail(int n, int k, double p) {
  // P(X <= k), X ~ Bin(n, p), by direct summation.
  double s = 0.0, c = 1.0;
  for (int x = 0; x <= k; ++x) {
    s += c * std::pow(p, x) * std::pow(1 - p, n - x);
    c = c * (n - x) / (x + 1);
  }
  return s;
}

}  // namespace

TEST_CASE("xy basis outcome 0 is the conjugate-phase plus state") {
  const auto b = xy_basis(kPi / 2);
  CHECK(overlap(b[0], kets::minus_i()) == doctest::Approx(1.0));
  CHECK(overlap(b[1], kets::plus_i()) == doctest::Approx(1.0));
  CHECK(overlap(xy_basis(0.0)[0], kets::plus()) == doctest::Approx(1.0));
}

TEST_CASE("input encoding by projection reproduces the published map") {
  const QubitState two = apply_unitary(QubitState::product({kets::plus(), kets::plus()}), gates::CZ(), {0, 1});
  CHECK(overlap(encode_input_by_measurement(two, kets::plus()).encoded.amplitudes(), kets::zero()) ==
        doctest::Approx(1.0));
  CHECK(overlap(encode_input_by_measurement(two, kets::zero()).encoded.amplitudes(), kets::plus()) ==
        doctest::Approx(1.0));
  CHECK(overlap(encode_input_by_measurement(two, kets::plus_i()).encoded.amplitudes(), kets::plus_i()) ==
        doctest::Approx(1.0));
  // Generic: H conj(phi).
  std::mt19937_64 rng(5);
  for (int k = 0; k < 10; ++k) {
    const Vec phi = testing::random_vector(2, rng);
    const auto enc = encode_input_by_measurement(two, phi);
    CHECK(overlap(enc.encoded.amplitudes(), gates::H() * phi.conjugate()) == doctest::Approx(1.0));
    CHECK(std::abs(enc.basis[0].dot(enc.basis[1])) < 1e-12);
  }
}

TEST_CASE("published Euler and single-angle tables") {
  const auto x = euler_angles("X");
  CHECK(x[0] == doctest::Approx(kPi));
  CHECK(x[1] == 0.0);
  const auto h = euler_angles("H");
  for (double a : h) CHECK(a == doctest::Approx(kPi / 2));
  CHECK(rx_angle("RX(pi/2)") == doctest::Approx(kPi / 2));
  CHECK(rx_angle("I") == 0.0);
  CHECK_THROWS_AS(euler_angles("T"), Error);
  CHECK_THROWS_AS(rx_angle("H"), Error);
  // RX(pi/2) projections are onto |-i>, |+i> in the outcome-0, -1 order.
  CHECK(overlap(xy_basis(rx_angle("RX(pi/2)"))[0], kets::minus_i()) == doctest::Approx(1.0));
}

TEST_CASE("five-qubit line: H on |0> gives |+> and every Euler gate has fidelity 1") {
  const QubitState l5 = named_state("L5");
  const MeasurementPattern p = line5_pattern(euler_angles("H"), kets::zero());
  const PatternRun r = run_pattern(l5, p);
  CHECK(fidelity(r.output, QubitState(1, kets::plus())) == doctest::Approx(1.0).epsilon(1e-12));
  for (const std::string g : {"X", "H", "RZ(pi/2)"}) {
    const double f = pattern_fidelity([&](const Vec& in) { return line5_pattern(euler_angles(g), in); }, l5,
                                      named_gate(g));
    CHECK_MESSAGE(std::abs(f - 1.0) < 1e-9, g);
  }
}

TEST_CASE("three-vertex line: identity teleports and RX angles reproduce the gates") {
  const QubitState l3 = named_state("L3");
  std::mt19937_64 rng(9);
  const Vec in = testing::random_vector(2, rng);
  const MeasurementPattern id = line3_pattern(0.0, in, Encoding::Physical);
  CHECK(fidelity(run_pattern(l3, id).output, QubitState(1, in)) == doctest::Approx(1.0).epsilon(1e-12));
  for (const std::string g : {"I", "X", "RX(pi/2)", "RX(-pi/2)"}) {
    const double f = pattern_fidelity(
        [&](const Vec& v) { return line3_pattern(rx_angle(g), v, Encoding::Physical); }, l3, named_gate(g));
    CHECK_MESSAGE(std::abs(f - 1.0) < 1e-9, g);
  }
}

TEST_CASE("track-and-correct gives the gate on every outcome branch") {
  const QubitState l5 = named_state("L5");
  const QubitState l3 = named_state("L3");
  std::mt19937_64 rng(21);
  int corrected = 0;
  for (int t = 0; t < 40; ++t) {
    const Vec in = testing::random_vector(2, rng);
    for (const std::string g : {"X", "H", "RZ(pi/2)"}) {
      const auto p = line5_pattern(euler_angles(g), in, ByproductPolicy::TrackAndCorrect);
      const PatternRun r = run_pattern(l5, p, &rng);
      for (int o : r.outcomes) corrected += o;
      CHECK(fidelity(r.output, QubitState(1, named_gate(g) * in)) == doctest::Approx(1.0).epsilon(1e-9));
    }
    const auto p3 = line3_pattern(kPi / 3, in, Encoding::Physical, ByproductPolicy::TrackAndCorrect);
    const PatternRun r3 = run_pattern(l3, p3, &rng);
    CHECK(fidelity(r3.output, QubitState(1, gates::RX(kPi / 3) * in)) == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(corrected > 20);  // nonzero outcomes were actually exercised
}

TEST_CASE("repetition-encoded line equals the physical line at zero noise") {
  const QubitState c6 = named_state("crazy6");
  const QubitState l3 = named_state("L3");
  const MeasurementPattern pl = line3_pattern(kPi / 2, kets::plus(), Encoding::Logical);
  const MeasurementPattern pp = line3_pattern(kPi / 2, kets::plus(), Encoding::Physical);
  const DensityOperator lo = pattern_output_qubit(run_pattern(c6, pl), pl);
  const DensityOperator po = run_pattern(l3, pp).output;
  CHECK((lo.matrix() - po.matrix()).norm() < 1e-9);
  for (const std::string g : {"I", "X", "RX(pi/2)", "RX(-pi/2)"}) {
    const double f = pattern_fidelity(
        [&](const Vec& v) { return line3_pattern(rx_angle(g), v, Encoding::Logical); }, c6, named_gate(g));
    CHECK_MESSAGE(std::abs(f - 1.0) < 1e-9, g);
  }
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const Vec in = testing::random_vector(2, rng);
    const auto p = line3_pattern(0.7, in, Encoding::Logical, ByproductPolicy::TrackAndCorrect);
    const PatternRun r = run_pattern(c6, p, &rng);
    REQUIRE_FALSE(r.discarded);
    CHECK(fidelity(pattern_output_qubit(r, p), QubitState(1, gates::RX(0.7) * in)) ==
          doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("logical bases") {
  for (auto kind : {LogicalKind::Z, LogicalKind::X, LogicalKind::Y, LogicalKind::XY}) {
    const auto b = logical_basis(kind, 0.4);
    Mat g(4, 4);
    for (int i = 0; i < 4; ++i) g.col(i) = b.vectors[i];
    CHECK((g.adjoint() * g - Mat::Identity(4, 4)).norm() < 1e-12);
  }
  const QubitState psi_plus(2, logical_zero());
  const auto pz = outcome_probabilities(psi_plus, logical_basis(LogicalKind::Z).vectors, {0, 1});
  CHECK(pz[0] == doctest::Approx(1.0));
  const QubitState pm = QubitState::product({kets::plus(), kets::minus()});
  const auto px = outcome_probabilities(pm, logical_basis(LogicalKind::X).vectors, {0, 1});
  CHECK(px[2] == doctest::Approx(1.0));
  CHECK_FALSE(LogicalBasis::valid(2));
  // XY at 0 is the X basis.
  const auto xy = logical_basis(LogicalKind::XY, 0.0);
  CHECK(overlap(xy.vectors[0], logical_basis(LogicalKind::X).vectors[0]) == doctest::Approx(1.0));
  // A single Z on one qubit of the middle pair is flagged.
  MeasurementPattern p = line3_pattern(0.0, kets::plus(), Encoding::Logical, ByproductPolicy::TrackAndCorrect);
  QubitState c6 = apply_unitary(named_state("crazy6"), gates::Z(), {2});
  std::mt19937_64 rng(1);
  int flagged = 0;
  for (int t = 0; t < 20; ++t) flagged += run_pattern(c6, p, &rng).discarded;
  CHECK(flagged == 20);
}

TEST_CASE("pattern validation and serialization") {
  MeasurementPattern p = line5_pattern({0, 0, 0}, kets::zero());
  CHECK_NOTHROW(p.validate());
  CHECK(p.to_json()["steps"].size() == 4);
  p.outputs = {3};
  CHECK_THROWS_AS(p.validate(), Error);
  MeasurementPattern q = line5_pattern({0, 0, 0}, kets::zero(), ByproductPolicy::TrackAndCorrect);
  CHECK_THROWS_AS(run_pattern(named_state("L5"), q), Error);
  CHECK_THROWS_AS(run_pattern(named_state("L3"), line5_pattern({0, 0, 0}, kets::zero())), Error);
}

TEST_CASE("process tomography on known channels") {
  auto unitary = [](const Mat& u) {
    return [u](const Vec& in) { return DensityOperator(QubitState(1, u * in)); };
  };
  const auto id = process_tomography(unitary(gates::I2()));
  CHECK(std::abs(id.chi(0, 0) - 1.0) < 1e-12);
  CHECK(id.chi.norm() == doctest::Approx(1.0));
  // H = (X + Z)/sqrt2: weight 1/2 on XX, ZZ, XZ, ZX.
  const auto h = process_tomography(unitary(gates::H()));
  CHECK(h.chi(1, 1).real() == doctest::Approx(0.5));
  CHECK(h.chi(3, 3).real() == doctest::Approx(0.5));
  CHECK(h.chi(1, 3).real() == doctest::Approx(0.5));
  CHECK(process_fidelity(h.chi, chi_of_unitary(gates::H())) == doctest::Approx(1.0));
  const auto deph = process_tomography([](const Vec& in) {
    return dephase(DensityOperator(QubitState(1, in)), 0, 0.5);
  });
  CHECK(deph.chi(0, 0).real() == doctest::Approx(0.5));
  CHECK(deph.chi(3, 3).real() == doctest::Approx(0.5));
  CHECK(std::abs(deph.chi(0, 3)) < 1e-12);
  CHECK_FALSE(deph.clamped);
  // A non-linear "channel" forces clamping.
  const auto bad = process_tomography([](const Vec& in) {
    return DensityOperator(QubitState(1, std::abs(in(1)) > 0.9 ? kets::zero() : kets::one()));
  });
  CHECK(bad.clamped);
  CHECK(bad.chi.trace().real() == doctest::Approx(1.0));
}

TEST_CASE("branched layouts match the target graphs") {
  for (auto code : {BranchedCode::B3, BranchedCode::B5, BranchedCode::B7, BranchedCode::Crazy6}) {
    const BranchedLayout l = branched_layout(code);
    Hypergraph g(l.num_qubits);
    for (int m : l.middle) {
      g.toggle_edge({std::min(m, l.input), std::max(m, l.input)});
      g.toggle_edge({std::min(m, l.output), std::max(m, l.output)});
    }
    CHECK(fidelity(branched_state(code), build_state(g)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("teleportation: analytic curves equal the density-matrix simulation") {
  for (auto code : {BranchedCode::B3, BranchedCode::B5, BranchedCode::B7}) {
    for (auto mode : {ErrorMode::OneQubit, ErrorMode::TwoQubit, ErrorMode::AllQubits}) {
      for (int k = 0; k <= 10; ++k) {
        TeleportOptions o;
        o.mode = mode;
        o.p = 0.1 * k;
        o.method = TeleportMethod::Analytic;
        const double a = teleport_branched(code, o).fidelity;
        o.method = TeleportMethod::DensityMatrix;
        const double d = teleport_branched(code, o).fidelity;
        CHECK(std::abs(a - d) < 1e-9);
      }
    }
  }
  TeleportOptions o;
  o.p = 0.2;
  const double b3 = teleport_branched(BranchedCode::B3, o).fidelity;
  const double b7 = teleport_branched(BranchedCode::B7, o).fidelity;
  CHECK(b3 == doctest::Approx(0.8));
  CHECK(b7 == doctest::Approx(binom_tail(5, 2, 0.2)));
  CHECK(b7 - b3 == doctest::Approx(0.14208).epsilon(1e-9));
  o.p = 0.5;
  for (auto code : {BranchedCode::B3, BranchedCode::B5, BranchedCode::B7}) {
    CHECK(teleport_branched(code, o).fidelity == doctest::Approx(0.5));
  }
  o.mode = ErrorMode::OneQubit;
  for (double p : {0.3, 0.9, 1.0}) {
    o.p = p;
    CHECK(teleport_branched(BranchedCode::B5, o).fidelity == doctest::Approx(1.0));
  }
}

TEST_CASE("teleportation: ordering below and above threshold") {
  auto f = [](BranchedCode c, double p) {
    TeleportOptions o;
    o.p = p;
    o.method = TeleportMethod::Analytic;
    return teleport_branched(c, o).fidelity;
  };
  for (double p : {0.05, 0.2, 0.4}) {
    CHECK(f(BranchedCode::B7, p) >= f(BranchedCode::B5, p));
    CHECK(f(BranchedCode::B5, p) >= f(BranchedCode::B3, p));
  }
  for (double p : {0.6, 0.8}) {
    CHECK(f(BranchedCode::B7, p) <= f(BranchedCode::B5, p));
    CHECK(f(BranchedCode::B5, p) <= f(BranchedCode::B3, p));
  }
}

TEST_CASE("teleportation: other inputs, detuned basis and sampling") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 5; ++t) {
    TeleportOptions o;
    o.input = testing::random_vector(2, rng);
    o.p = 0.3;
    o.mode = ErrorMode::TwoQubit;
    o.method = TeleportMethod::Analytic;
    const double a = teleport_branched(BranchedCode::B7, o).fidelity;
    o.method = TeleportMethod::DensityMatrix;
    CHECK(std::abs(a - teleport_branched(BranchedCode::B7, o).fidelity) < 1e-9);
  }
  // One middle qubit: the rotated basis and the Z channel agree exactly.
  for (double p : {0.0, 0.1, 0.37, 0.5, 1.0}) {
    TeleportOptions o;
    o.p = p;
    o.method = TeleportMethod::Detuned;
    const double det = teleport_branched(BranchedCode::B3, o).fidelity;
    CHECK(det == doctest::Approx(1.0 - p).epsilon(1e-9));
  }
  TeleportOptions o;
  o.p = 0.25;
  o.method = TeleportMethod::DensityMatrix;
  const double exact = teleport_branched(BranchedCode::B5, o).fidelity;
  o.method = TeleportMethod::Sampled;
  o.shots = 4000;
  o.seed = 3;
  const auto s = teleport_branched(BranchedCode::B5, o);
  CHECK(s.std_error > 0.0);
  CHECK(std::abs(s.fidelity - exact) < 4 * s.std_error);
  const auto again = teleport_branched(BranchedCode::B5, o);
  CHECK(again.fidelity == s.fidelity);
  o.p = 1.5;
  CHECK_THROWS_AS(teleport_branched(BranchedCode::B5, o), Error);
}

TEST_CASE("loss tolerance of the seven-qubit branched state") {
  for (int ph : {0, 2, 3}) {
    CHECK(loss_teleport(ph, 0.0).fidelity == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(loss_teleport(2, 0.0, kets::minus_i()).fidelity == doctest::Approx(1.0).epsilon(1e-9));
  // Three survivors after losing A or C.
  CHECK(loss_teleport(0, 0.2).fidelity == doctest::Approx(0.896).epsilon(1e-9));
  CHECK(loss_teleport(2, 0.2).fidelity == doctest::Approx(0.896).epsilon(1e-9));
  // Four survivors after losing D: an even split cannot be decoded.
  CHECK(loss_teleport(3, 0.5).fidelity == doctest::Approx(5.0 / 16.0).epsilon(1e-9));
  CHECK(loss_teleport(3, 0.5, Vec(), TeleportMethod::DensityMatrix, TieRule::Half).fidelity ==
        doctest::Approx(0.5).epsilon(1e-9));
  for (int ph : {0, 2, 3}) {
    for (double p : {0.1, 0.3, 0.5, 0.7}) {
      const double d = loss_teleport(ph, p).fidelity;
      const double a = loss_teleport(ph, p, Vec(), TeleportMethod::Analytic).fidelity;
      const int survivors = ph == 3 ? 4 : 3;
      CHECK(std::abs(d - a) < 1e-9);
      CHECK(std::abs(d - majority_fidelity(survivors, survivors, p)) < 1e-9);
    }
  }
  CHECK_THROWS_AS(loss_teleport(1, 0.0), Error);
}
