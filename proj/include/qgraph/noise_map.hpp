// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0
//
// Chip-level simulation of single-qubit gates on the three-vertex line, with
// physical qubits (L3) or the repetition-encoded line (crazy6), under heater
// voltage noise and source distinguishability.
//
// Both resources start from the fused GHZ8 state. Each qudit then sees one
// 4x4 unitary: the recipe's local gates followed by the pattern's measurement
// basis, compiled onto a 6-MZI triangular mesh driven by 12 heaters (48 in
// all). Runs are post-selected on outcome 0 for every measured or projected
// qubit; the output is reconstructed from its X, Y and Z expectations, each
// a separate chip setting. Logical outputs are read in the logical bases and
// the two error-flag outcomes are discarded.

#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "qgraph/device.hpp"
#include "qgraph/mbqc.hpp"

namespace qg {

// The six cardinal states |0>, |1>, |+>, |->, |+i>, |-i>.
std::vector<Vec> cardinal_states();

class ChipLineExperiment {
 public:
  // Gates by name, as accepted by rx_angle.
  ChipLineExperiment(Encoding encoding, const ChipConfig& config = ChipConfig::ghz(4),
                     std::vector<std::string> gates = {"I", "X", "RX(pi/2)", "RX(-pi/2)"},
                     std::vector<Vec> inputs = cardinal_states());

  Encoding encoding() const { return encoding_; }
  std::size_t settings() const { return settings_.size(); }
  // Chip settings per noise draw: inputs x gates x 3 tomography axes.
  std::size_t chip_settings() const { return 3 * settings_.size(); }

  // Mean state fidelity over every (input, gate) for one noise draw. Voltage
  // noise is drawn per chip setting, mesh by mesh, from rng. An incoherent
  // gate treats its two photons as distinguishable. Throws ZeroMassError
  // when a setting keeps nothing.
  double mean_fidelity(double sigma_v, bool bc_incoherent, bool ad_incoherent, std::mt19937_64& rng) const;

  // One trial for run_noisy_trials: each fusion gate is incoherent with
  // probability noise.epsilon, drawn first from rng (B-C, then A-D), then
  // voltage noise at noise.sigma_v. Returns the infidelity 1 - F.
  double trial(const NoiseConfig& noise, std::mt19937_64& rng) const;
  TrialExperiment experiment() const;

  // Output Bloch vector of one (input, gate) setting, without noise.
  std::array<double, 3> ideal_bloch(std::size_t setting) const;
  std::array<double, 3> chip_bloch(std::size_t setting, double sigma_v, bool bc_incoherent,
                                   bool ad_incoherent, std::mt19937_64& rng) const;

 private:
  struct Axis {
    std::array<MeshDrive, 4> drives;
  };
  struct Setting {
    std::array<Axis, 3> axes;  // X, Y, Z
    std::array<double, 3> ideal{};
  };

  const Branches& fused(bool bc_incoherent, bool ad_incoherent) const;

  Encoding encoding_;
  int output_qudit_ = 0;
  // Detection index (qudit A most significant, 2 bits per qudit) of the
  // + and - readouts of the output with every other qubit at its required
  // outcome.
  std::size_t plus_index_ = 0;
  std::size_t minus_index_ = 0;
  std::vector<Setting> settings_;
  std::array<Branches, 4> fused_;  // indexed by 2 bc + ad incoherence
};

struct NoiseMapOptions {
  std::vector<double> sigma_v = {0.0, 0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.1};
  std::vector<double> epsilon = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  int trials = 500;
  std::uint64_t seed = 1;
  int threads = 0;
};

struct NoiseMapPoint {
  double level = 0.0;  // sigma_v in volts, or epsilon
  TrialStats physical;
  TrialStats logical;
  // Logical minus physical infidelity, and the two 95 % half-widths added
  // in quadrature.
  double delta() const { return logical.mean - physical.mean; }
  double combined_ci() const;
  nlohmann::json to_json() const;
};

struct NoiseMapResult {
  std::vector<NoiseMapPoint> voltage;           // epsilon = 0
  std::vector<NoiseMapPoint> distinguishability;  // sigma_v = 0
  int trials = 0;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
};

// Both encodings use the same noise seed, so trial t sees the same random
// stream in each (common random numbers).
NoiseMapResult noise_map(const NoiseMapOptions& options = {});

}  // namespace qg
