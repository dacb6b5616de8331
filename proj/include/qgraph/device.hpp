// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0
//
// Model of the four-qudit photonic chip: thermal phase shifters and their
// calibration, pair sources, the mode-switch fusion gates with post-selection,
// triangular MZI meshes for qudit measurements, and the Monte Carlo trial
// runner for voltage and distinguishability noise.
//
// Qudits A, B, C, D are indices 0..3. Source S(i+1) emits the pair |i>|i>
// into qudits A, B (i < 4) and S(i+5) into C, D. A qudit of dimension d is
// written on log2(d) qubits, mode v on bits big-endian.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qgraph/fock.hpp"
#include "qgraph/state.hpp"

namespace qg {

// ---------------------------------------------------------- phase shifters

inline constexpr double kMaxVoltage = 6.0;

// I(V) = rho0 + rho1 V + rho2 V^2 and phi(V) = omega V I(V) - phi0.
struct PhaseShifterCal {
  double rho0 = 0.0;   // A
  double rho1 = 2e-3;  // A/V
  double rho2 = -3e-5; // A/V^2
  double omega = 125.0;  // rad/W
  double phi0 = 0.3;     // rad

  double power(double v) const { return v * (rho0 + rho1 * v + rho2 * v * v); }
  // Phase span over [0, kMaxVoltage]; below 2 pi some phases are unreachable.
  double span() const;
  // Phase must rise strictly with voltage on the whole range.
  bool monotone() const;

  nlohmann::json to_json() const;
  static PhaseShifterCal from_json(const nlohmann::json& j);
};

// Throws unless v lies in [0, kMaxVoltage].
double phase_from_voltage(const PhaseShifterCal& cal, double v);
// Lowest voltage whose phase equals phi modulo 2 pi (phi itself when it is
// reachable directly). Throws when no representative is in range or the
// calibration is not monotone.
double voltage_from_phase(const PhaseShifterCal& cal, double phi);

// Heater calibrations around the defaults: rho1, rho2, omega scaled by
// independent factors in [1 - jitter, 1 + jitter], phi0 uniform in [0, 2 pi).
std::vector<PhaseShifterCal> jittered_calibrations(std::size_t count, std::uint64_t seed,
                                                   double jitter = 0.05);

struct CalibrationFit {
  PhaseShifterCal cal;
  double amplitude = 0.0;   // A
  double background = 0.0;  // B
  double visibility = 0.0;  // A / (A + B)
  double fringe_rms = 0.0;  // residual of the fringe fit
  double iv_rms = 0.0;      // residual of the current fit
};

// IV samples (V, I) fix rho0..rho2 by linear least squares. Fringe samples
// (V, P_opt) are fit to (B + A) - A cos(omega P(V) - phi0): omega grid scan,
// Brent refinement of the separable problem, then Levenberg-Marquardt on all
// four fringe parameters. Throws on fewer than 8 fringe points, fewer than 3
// IV points, a fringe spanning less than one period, or non-convergence.
CalibrationFit fit_calibration(const std::vector<std::pair<double, double>>& fringe,
                               const std::vector<std::pair<double, double>>& iv);

// --------------------------------------------------------------- qudit map

// Mode v of a ququart <-> qubit pair (v >> 1, v & 1).
std::pair<int, int> qudit_to_qubits(int v);
int qubits_to_qudit(int high, int low);

// sum_i pumps[i] |i>|i>, normalized, on 2 log2(d) qubits with d = pumps.size().
// Throws when every pump is zero or d is not a power of two.
QubitState build_qudit_bell(const std::vector<cplx>& pumps);

// ----------------------------------------------------------------- fusion

// Mode-switch fusion gate between two qudits: one MZI per mode k couples mode
// k of the first qudit with mode k of the second. Internal phase 0 exchanges
// the two modes and pi leaves them in place.
struct FusionGate {
  std::vector<double> phases;  // one per mode

  static FusionGate identity(int d);
  // Exchange exactly the listed modes.
  static FusionGate swapping(int d, const std::vector<int>& modes);
  // 2d x 2d unitary on (first modes, second modes).
  Mat network() const;
};

// diag(1, e^{i t}) [[sin t/2, cos t/2], [cos t/2, -sin t/2]]
Mat switch_matrix(double theta);

struct ChipConfig {
  int dim = 4;
  // S1..S4 feed qudits A, B; S5..S(2d) feed C, D. Zero means not pumped.
  std::vector<cplx> pumps;
  FusionGate bc;  // between B and C
  FusionGate ad;  // between A and D
  // Per-qudit detection unitaries; identity when empty.
  std::vector<Mat> unitaries;
  // Two heaters (internal, external) per MZI, qudit-major; empty = defaults.
  std::vector<PhaseShifterCal> calibrations;
  std::uint64_t calibration_seed = 2026;

  // Pumps normalized per module; unitaries checked. Throws on violations.
  void validate() const;
  // Two Bell-type pairs (|00> + |d-1 d-1>) fused on mode 0 by B-C: the
  // 4d-mode GHZ state (GHZ8 for d = 4).
  static ChipConfig ghz(int d = 4);
  // All sources pumped with the phases of the eight-term four-qudit state and
  // B-C exchanging modes 1 and 2.
  static ChipConfig four_p_four_d();
  // Heater calibrations, generated from calibration_seed when not given.
  std::vector<PhaseShifterCal> heater_calibrations() const;

  nlohmann::json to_json() const;
  static ChipConfig from_json(const nlohmann::json& j);
};

struct NoiseConfig {
  double sigma_v = 0.0;  // volts
  double epsilon = 0.0;  // probability that a fusion gate acts incoherently
  int trials = 500;
  std::uint64_t seed = 1;

  void validate() const;
  nlohmann::json to_json() const;
  static NoiseConfig from_json(const nlohmann::json& j);
};

// Product of the two module pair states over the four qudits.
QubitState source_state(const ChipConfig& config);

// Mixture of unnormalized pure branches.
struct Branches {
  int num_qubits = 0;
  std::vector<Vec> parts;

  double mass() const;
  DensityOperator density() const;
};

// Applies one fusion gate to qudits (first, second) of a four-qudit register
// and keeps the events with one photon in each. A coherent gate maps every
// branch to one branch; an incoherent gate treats the two photons as
// distinguishable and splits it into the direct and exchanged paths.
Branches apply_fusion(const Branches& in, const FusionGate& gate, int first, int second,
                      bool coherent);

struct FusionResult {
  DensityOperator state{QubitState(0)};
  double probability = 0.0;
  std::optional<QubitState> pure;
  Branches branches;  // unnormalized, before renormalization
};

// B-C then A-D on the joint state. epsilon[g] weights the incoherent map of
// gate g (0 = B-C, 1 = A-D) in a linear mixture. Throws when the kept mass is
// below 1e-12.
FusionResult fusion_postselect(const QubitState& joint, const FusionGate& bc, const FusionGate& ad,
                               std::array<double, 2> epsilon = {0.0, 0.0});
FusionResult fusion_postselect(const ChipConfig& config, std::array<double, 2> epsilon = {0.0, 0.0});

// The same two gates as one 4d-mode network run through the permanent-based
// simulator: photons of qudits A, B carry label 0 and C, D label 1.
PostselectResult fusion_via_fock(const QubitState& joint, const FusionGate& bc, const FusionGate& ad,
                                 double distinguishability = 0.0);

// ------------------------------------------------------------------ meshes

// t(theta, phi) = BS diag(e^{i theta}, 1) BS diag(e^{i phi}, 1), with
// BS = [[1, i], [i, 1]] / sqrt2. theta = pi is the bar state.
Mat mzi_matrix(double theta, double phi);

struct MziSetting {
  int mode = 0;  // couples (mode, mode + 1)
  double theta = 0.0;
  double phi = 0.0;
};

struct MeshPhases {
  int dim = 0;
  std::vector<MziSetting> mzis;  // application order, first acts first
  std::vector<double> output_phases;

  nlohmann::json to_json() const;
};

// Triangular (Reck) decomposition: U = D T_K ... T_1. Throws on a
// non-unitary target.
MeshPhases compile_measurement_mesh(const Mat& target);
Mat mesh_to_unitary(const MeshPhases& mesh);

// Realized mesh when every MZI phase is set through its heater: the ideal
// voltage gets Gaussian noise of width sigma_v, is clamped to [0, kMaxVoltage]
// and mapped back to a phase. heaters[2m] drives theta of MZI m, heaters[2m+1]
// its phi. Output phases are left ideal.
Mat noisy_mesh_unitary(const MeshPhases& mesh, const std::vector<PhaseShifterCal>& heaters,
                       double sigma_v, std::mt19937_64& rng);

// A mesh with its ideal heater voltages solved once, for repeated noisy
// realizations.
struct MeshDrive {
  MeshPhases mesh;
  std::vector<PhaseShifterCal> heaters;
  std::vector<double> voltages;  // heater order, as above
};
MeshDrive drive_mesh(const MeshPhases& mesh, const std::vector<PhaseShifterCal>& heaters);
Mat noisy_mesh_unitary(const MeshDrive& drive, double sigma_v, std::mt19937_64& rng);

// Detector-outcome distribution over the four qudits (index = register value)
// after per-qudit unitaries, unnormalized.
std::vector<double> detection_probabilities(const Branches& fused, const std::vector<Mat>& unitaries);

// ------------------------------------------------------------- trial runner

struct TrialStats {
  int trials = 0;
  int failures = 0;  // trials whose experiment reported zero post-selected mass
  double mean = 0.0;
  double std_dev = 0.0;
  double ci_half_width = 0.0;  // 1.96 sigma / sqrt(n)
  std::vector<double> values;  // per trial, kept when requested; NaN on failure

  nlohmann::json to_json() const;
};

// Thrown by experiments when nothing survives post-selection.
struct ZeroMassError : Error {
  using Error::Error;
};

// One noisy run. The generator is seeded from (noise.seed, trial index).
using TrialExperiment =
    std::function<double(const ChipConfig& config, const NoiseConfig& noise, std::mt19937_64& rng)>;

// Runs noise.trials independent trials. ZeroMassError counts as a failure;
// any other exception propagates. The result depends only on (config, noise).
TrialStats run_noisy_trials(const ChipConfig& config, const TrialExperiment& experiment,
                            const NoiseConfig& noise, bool keep_values = false, int threads = 0);

}  // namespace qg
