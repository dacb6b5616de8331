// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0
//
// Few-photon linear optics by matrix permanents. Network convention:
// U(i, j) is the amplitude for a photon entering mode j to leave in mode i.

#pragma once

#include <optional>
#include <vector>

#include "qgraph/state.hpp"

namespace qg {

inline constexpr int kMaxPhotons = 4;

using FockConfiguration = std::vector<int>;  // occupation per mode

// Ryser's formula, Gray-code ordered. Square matrices only.
cplx permanent(const Mat& a);

// <out| U |in> with the bosonic normalization 1/sqrt(prod n_in! prod n_out!).
cplx fock_amplitude(const Mat& network, const FockConfiguration& in, const FockConfiguration& out);

// All configurations of `photons` photons in `modes` modes, lexicographic.
std::vector<FockConfiguration> fock_configurations(int modes, int photons);

struct LabeledPhoton {
  int mode = 0;
  int label = 0;  // photons with different labels never interfere
};

struct FockTerm {
  cplx amplitude;
  std::vector<LabeledPhoton> photons;
};

struct PostselectResult {
  DensityOperator state{QubitState(0)};
  double probability = 0.0;
  // Present when the conditional state is a single coherent branch.
  std::optional<QubitState> pure;
  // Unnormalized conditional amplitudes when `pure` is present; index is the
  // group register value, big-endian over groups.
  Vec amplitudes;
};

// Propagates the input through the network and keeps the events with one
// photon in every mode group. Group g with 2^k modes becomes k qubits, mode
// offset v inside the group written big-endian. `distinguishability` mixes
// the all-identical (0) and the labelled (1) unnormalized conditional
// operators linearly.
PostselectResult run_postselected(const Mat& network, const std::vector<FockTerm>& input,
                                  const std::vector<std::vector<int>>& groups,
                                  double distinguishability = 1.0);

}  // namespace qg
