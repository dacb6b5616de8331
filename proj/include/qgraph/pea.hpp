// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0
//
// Iterative phase estimation run as a three-step measurement pattern on the
// three-vertex line (physical) or its repetition-encoded six-qubit version
// (logical). For a round with multiplier M and feedback phase theta (both in
// turns) the leftmost vertex is measured at 2 pi M phi0, the central vertex at
// 0 and the output vertex at -2 pi theta, so that outcome 0 has probability
// cos^2(pi (M phi0 - theta)).
//
// Bits are read least significant first. With phi0 = 0.b1 b2 ... bm, bit k
// uses M = 2^(k-1) and theta = 0.0 b(k+1) ... bm from the bits already
// inferred.

#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "qgraph/types.hpp"

namespace qg {

// cos^2(pi (M phi0 - theta)), the probability of outcome 0. Throws for M < 1.
double bit_probability(long long m, double phi0, double theta);

enum class PeaEncoding { Physical, Logical };

struct PeaNoise {
  // Z flip probability on every qubit of the central (protected) layer.
  double dephasing = 0.0;
};

struct PeaBit {
  int index = 0;           // k, 1 = most significant
  long long multiplier = 1;
  double theta = 0.0;      // turns
  int samples = 0;
  int ones = 0;
  long long attempts = 0;  // runs drawn, including post-selection rejects
  double p1 = 0.0;         // ones / samples, or the exact value in exact mode
  double p1_exact = 0.0;   // conditional on acceptance
  double p1_ideal = 0.0;   // 1 - bit_probability(M, phi0, theta)
  int bit = 0;
  int true_bit = 0;
  bool correct() const { return bit == true_bit; }
};

struct PeaRun {
  double phi0 = 0.0;
  int bits_count = 3;
  int samples = 17;
  PeaEncoding encoding = PeaEncoding::Physical;
  PeaNoise noise;
  std::uint64_t seed = 1;
  bool exact = false;
  std::vector<PeaBit> bits;  // in inference order, least significant first
  double estimate = 0.0;     // 0.b1 ... bm

  int correct_bits() const;
  nlohmann::json to_json() const;
};

struct PeaOptions {
  int bits = 3;
  int samples = 17;
  PeaEncoding encoding = PeaEncoding::Physical;
  PeaNoise noise;
  std::uint64_t seed = 1;
  // Decide each bit from the exact conditional P(1) instead of samples.
  bool exact = false;
  // Give up on a sample after this many rejected runs.
  long long max_attempts = 100000;
};

// Each sample is one simulated run: all outcomes are drawn from the joint
// distribution and the run is redrawn unless the leftmost and central
// outcomes are 0 and the logical readout is valid. Majority vote over the
// samples, ties read as 0. Sample j of bit k uses derive_seed(seed, k * 2^20 + j).
PeaRun pea_run(double phi0, const PeaOptions& options = {});

struct BitCounts {
  int n = 0;        // accepted samples
  int correct = 0;  // samples agreeing with the true bit
};

// Fraction of bootstrap rounds in which the logical tables give strictly more
// correctly decided bits than the physical ones. Each round redraws every
// bit's correct count from Binomial(n, correct / n) and decides it by strict
// majority. Throws on empty or mismatched tables or n < 1.
double bootstrap_confidence(const std::vector<BitCounts>& physical, const std::vector<BitCounts>& logical,
                            int rounds = 10000, std::uint64_t seed = 1);

// Per-bit counts of a run against its true bits.
std::vector<BitCounts> bit_counts(const PeaRun& run);

}  // namespace qg
