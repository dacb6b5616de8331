// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0
//
// Post-selected generation rates for n-qubit GHZ states built by fusing
// photon pairs, with one qubit per photon or log2(d) qubits per d-mode photon.
//
// A scheme with k = log2(d) qubits per photon uses 2 ceil(n / 2k) photons
// (pairs are fused, so the count is even), one pair per two photons and one
// fewer fusions than pairs. Each photon is collected with probability
// `collection` and crosses d - 1 interferometers of transmission eta.

#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "qgraph/types.hpp"

namespace qg {

struct RateParams {
  double s = 0.03;          // pair-generation probability per pulse
  double rep_rate = 5e8;    // Hz
  double p_fuse = 0.5;
  double eta = 0.7943282347242815;  // one MZI built from two MMIs, 1 dB
  double collection = 0.03;         // source to detector, per photon
  int d_max = 16;
  int photon_max = 10;  // applies to qudit schemes

  // Low-loss components: 1 % MZI loss, 50 % per-photon collection.
  static RateParams low_loss();
  void validate() const;
};

struct RateEncoding {
  enum class Kind { Qubit, Qudit };
  Kind kind = Kind::Qubit;
  int d = 2;

  static RateEncoding qubit() { return {}; }
  static RateEncoding qudit(int d) { return {Kind::Qudit, d}; }
  std::string str() const;  // "qubit" or "qudit(d)"
};

struct RateFactor {
  std::string name;
  double value = 0.0;
};

struct GhzRate {
  int n = 0;
  RateEncoding encoding;
  int d = 2;
  int photons = 0;
  int pairs = 0;
  int fusions = 0;
  double rate_hz = 0.0;
  // rep_rate, source, fusion, collection, mesh; rate_hz is their product
  // taken in this order.
  std::vector<RateFactor> factors;

  double factor(const std::string& name) const;
  nlohmann::json to_json() const;
};

// Feasible when n >= 2, d is a power of two no larger than d_max and, for a
// qudit scheme, the photon count is at most photon_max. Throws otherwise.
bool rate_feasible(int n, const RateEncoding& encoding, const RateParams& params);
GhzRate ghz_rate(int n, const RateEncoding& encoding, const RateParams& params = {});

struct RateComparison {
  int n = 0;
  GhzRate qubit;
  bool qudit_feasible = false;
  GhzRate best_qudit;  // highest rate over feasible d, smallest d on ties
};

std::vector<RateComparison> compare_encodings(int n_min, int n_max, const RateParams& params = {});

// One row per (n, encoding): n, encoding, d, photons, rate_hz, then the
// factors. Best qudit rows only.
std::string rates_csv(const std::vector<RateComparison>& table);

}  // namespace qg
