// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0
//
// Fidelity estimation from local measurements: stabilizer averaging,
// measurement-setting compilation, the rotated-equatorial GHZ protocol, the
// sparse off-diagonal protocol for the four-qudit state, and simulated counts
// with Poissonian bootstrap error bars.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "qgraph/pauli.hpp"
#include "qgraph/state.hpp"

namespace qg {

// ------------------------------------------------------------------ settings

// Measurement basis on one qubit, or on both qubits of one qudit (Bell).
struct LocalBasis {
  enum class Kind { Pauli, Equatorial, Bell };
  Kind kind = Kind::Pauli;
  std::vector<int> qubits;
  char axis = 'Z';     // Pauli only
  double theta = 0.0;  // Equatorial only: eigenbasis of cos(t) X + sin(t) Y

  std::vector<Vec> vectors() const;
};

class MeasurementSetting {
 public:
  MeasurementSetting() = default;
  // Groups must cover each qubit once; Bell groups only on qudit pairs
  // (2k, 2k+1).
  MeasurementSetting(int n, std::vector<LocalBasis> groups);

  // "XZZY": one Pauli axis per qubit.
  static MeasurementSetting from_pauli(const std::string& letters);
  static MeasurementSetting equatorial(int n, double theta);
  // Replaces qubits (2k, 2k+1) by a Bell-basis group.
  MeasurementSetting with_bell_pair(int qudit) const;

  int num_qubits() const { return n_; }
  const std::vector<LocalBasis>& groups() const { return groups_; }

  // True when the string is diagonal in this setting's product basis with
  // eigenvalues +-1 (letter match for Pauli groups).
  bool derives(const PauliString& p) const;
  // Eigenvalue of p (sign included) on outcome `index`; p must be derivable.
  double eigenvalue(const PauliString& p, std::uint64_t outcome) const;

  // Exact outcome distribution. Outcome bits are big-endian over qubits; a
  // group's local outcome index fills its own bit positions.
  std::vector<double> probabilities(const QubitState& psi) const;
  std::vector<double> probabilities(const DensityOperator& rho) const;

  // e.g. "XZ[B]Y" or "M(0.392699)M(0.392699)".
  std::string to_string() const;
  nlohmann::json to_json() const;
  static MeasurementSetting from_json(const nlohmann::json& j);

 private:
  int n_ = 0;
  std::vector<LocalBasis> groups_;
};

struct SettingPlan {
  std::vector<MeasurementSetting> settings;
  // derivations[i] = indices of the input stabilizers read from settings[i].
  std::vector<std::vector<std::size_t>> derivations;
};

// Greedy set cover over full-weight Pauli settings; ties go to the
// lexicographically smallest string (order I < X < Y < Z).
SettingPlan compile_settings(const std::vector<PauliString>& stabilizers);

// Assigns each stabilizer to the first setting that derives it. Throws if a
// stabilizer is not derivable from any setting.
SettingPlan derive_from(const std::vector<MeasurementSetting>& settings,
                        const std::vector<PauliString>& stabilizers);

// ---------------------------------------------------------- stabilizer sums

// 2^-n sum_S <S> over a full stabilizer group (signs carried by the strings).
// Throws unless 2^n distinct strings of length n are given.
double full_group_fidelity(const std::vector<std::pair<PauliString, double>>& expectations);
// Arithmetic mean; throws when empty.
double generator_mean(const std::vector<double>& expectations);

// ------------------------------------------------------- equatorial protocol

struct ThetaData {
  double population = 0.0;        // <0..0|rho|0..0> + <1..1|rho|1..1>
  std::vector<double> coherence;  // <M_{theta_k}^{x n}>, theta_k = k pi / n
};

// F = (C + P)/2 with C = (1/n) sum_k (-1)^k <M_{theta_k}^{x n}>. Throws when
// the sample count differs from n or P is outside [0, 1].
double theta_fidelity(double population, const std::vector<double>& coherence, int n = 8);
double theta_fidelity(const ThetaData& d, int n);
// Exact protocol inputs for a state, with respect to the n-qubit GHZ state.
ThetaData theta_data(const DensityOperator& rho);

// --------------------------------------------------- sparse qudit fidelity

// Target sum_k c_k |k> on `qudits` ququarts (two qubits each, mode v on bits
// (v >> 1, v & 1)).
struct SparseTarget {
  int qudits = 4;
  std::vector<std::vector<int>> kets;
  std::vector<cplx> coefficients;
};

SparseTarget four_p_four_d_target();

struct OffDiagTerm {
  std::size_t k = 0, l = 0;  // indices into the target's kets, k > l
  // Qudits where k and l differ with their (mode in k, mode in l) pair.
  std::vector<int> qudits;
  std::vector<std::pair<int, int>> modes;
  int settings = 0;    // 1 + 2^m local settings cover all four phase states
  int projectors = 0;  // settings * 2^m
  cplx value;          // <l|rho|k>
};

struct OffDiagResult {
  double fidelity = 0.0;
  std::vector<OffDiagTerm> terms;
  std::map<int, int> pairs_by_size;     // GHZ size m -> number of (k, l) pairs
  long long projectors = 0;             // optimized plan
  long long naive_projectors = 0;       // separate settings per phase state
  long long diagonal_projectors = 0;    // 4^qudits computational basis
};

// Fidelity from diagonal populations plus off-diagonal terms, each obtained
// from embedded GHZ stabilizer expectations of the four states
// (|k> + e^{i phi}|l>)/sqrt2, phi in {0, pi, pi/2, -pi/2}. Throws when the
// coefficients are not normalized.
OffDiagResult direct_fidelity_offdiag(const DensityOperator& rho, const SparseTarget& target);
// Plan only; `value` fields are zero and `fidelity` is unset.
OffDiagResult offdiag_plan(const SparseTarget& target);

// ------------------------------------------------------------------- counts

struct CountsRecord {
  MeasurementSetting setting;
  std::vector<long long> counts;  // indexed by outcome
  long long shots = 0;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
  static CountsRecord from_json(const nlohmann::json& j);
};

CountsRecord simulate_counts(const std::vector<double>& probabilities, const MeasurementSetting& setting,
                             long long shots, std::uint64_t seed);
CountsRecord simulate_counts(const QubitState& psi, const MeasurementSetting& setting, long long shots,
                             std::uint64_t seed);
CountsRecord simulate_counts(const DensityOperator& rho, const MeasurementSetting& setting, long long shots,
                             std::uint64_t seed);
// One record per setting; setting i uses derive_seed(seed, i).
std::vector<CountsRecord> simulate_all(const DensityOperator& rho, const std::vector<MeasurementSetting>& settings,
                                       long long shots, std::uint64_t seed, int threads = 0);

// Estimator of <p> from one record's histogram.
double estimate_expectation(const MeasurementSetting& setting, const std::vector<long long>& counts,
                            const PauliString& p);

struct ErrorBar {
  double mean = 0.0;
  double std_error = 0.0;
};

using Statistic = std::function<double(const std::vector<long long>& counts)>;
// Resamples every bin as Poisson(observed count) `rounds` times.
ErrorBar bootstrap_errorbar(const CountsRecord& record, const Statistic& statistic, int rounds = 1000,
                            std::uint64_t seed = 0);

}  // namespace qg
