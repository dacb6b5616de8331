// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0
//
// Measurement-based computation on line graphs and their repetition-encoded
// versions: measurement patterns, single-qubit gates from measurement
// angles, input encoding by projection, logical two-qubit bases, teleportation
// through branched (K_{2,m}) states under dephasing and photon loss, and
// process tomography.
//
// Angle convention: an XY-plane measurement at angle t has outcome 0 on
// (|0> + e^{-i t}|1>)/sqrt2 and outcome 1 on (|0> - e^{-i t}|1>)/sqrt2. On a
// line this moves the state E of the measured vertex to H RZ(t) E on the next
// one, with RZ(t) = diag(1, e^{i t}). Projecting a line's first vertex onto
// |phi> leaves H conj(phi) on the second, so a process input psi is encoded
// by projecting onto conj(psi).

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "qgraph/state.hpp"

namespace qg {

// (|0> +- e^{-i t}|1>)/sqrt2
std::vector<Vec> xy_basis(double theta);

// ------------------------------------------------------------ logical bases

// Two-qubit repetition code in the X basis: |0_L> = (|00> + |11>)/sqrt2,
// |1_L> = (|01> + |10>)/sqrt2, so |+_L> = |++> and |-_L> = |-->.
Vec logical_zero();
Vec logical_one();
// Embeds a qubit state a|0> + b|1> as a|0_L> + b|1_L>.
Vec encode_logical(const Vec& qubit);

enum class LogicalKind { Z, X, Y, XY };

struct LogicalBasis {
  // Four orthonormal vectors; outcomes 0 and 1 are the valid logical
  // outcomes, 2 and 3 (|+->, |-+>) flag a detected error.
  std::vector<Vec> vectors;
  static bool valid(int outcome) { return outcome == 0 || outcome == 1; }
};

// Z: {|0_L>, |1_L>}; X: {|++>, |-->}; Y: (|0_L> +- i|1_L>)/sqrt2;
// XY: (|0_L> +- e^{-i t}|1_L>)/sqrt2, the logical twin of xy_basis.
LogicalBasis logical_basis(LogicalKind kind, double theta = 0.0);

// Restriction of a two-qubit operator to the code space: the logical density
// operator (renormalized) and the code-space weight before renormalizing.
struct LogicalDecode {
  DensityOperator logical{QubitState(0)};
  double valid_weight = 0.0;
};
LogicalDecode decode_logical(const DensityOperator& rho);

// ---------------------------------------------------------------- patterns

enum class ByproductPolicy { PostSelectZero, TrackAndCorrect };

struct PatternStep {
  enum class Kind {
    XY,       // one qubit, angle theta
    Z,        // one qubit, computational basis, outcome 0 kept
    Logical,  // two qubits, logical XY basis at angle theta
    Project,  // projection onto `target` (one or two qubits), outcome 0 kept
  };
  Kind kind = Kind::XY;
  std::vector<int> qubits;
  double theta = 0.0;
  Vec target;  // Project only
};

struct MeasurementPattern {
  int num_qubits = 0;
  std::vector<PatternStep> steps;  // executed in order
  std::vector<int> outputs;        // unmeasured qubits, in output order
  bool logical_output = false;     // outputs form one logical qubit
  ByproductPolicy policy = ByproductPolicy::PostSelectZero;

  // Every qubit is either measured once or an output; logical steps use two
  // qubits. Throws otherwise.
  void validate() const;
  nlohmann::json to_json() const;
};

struct PatternRun {
  DensityOperator output{QubitState(0)};  // normalized, over `outputs`
  std::vector<int> outcomes;              // one per step
  bool discarded = false;                 // an invalid logical outcome was drawn
  double probability = 0.0;               // probability of the recorded outcomes
};

// Post-select-zero forces outcome 0 everywhere (rng unused). Track-and-correct
// samples the XY and logical steps, flips each angle's sign according to the
// accumulated X byproduct and applies the Pauli correction to the output
// (logical X_L = X on the first output qubit, Z_L = Z Z). Z and Project steps
// are always post-selected. Throws on a zero-probability branch.
PatternRun run_pattern(const DensityOperator& rho, const MeasurementPattern& pattern,
                       std::mt19937_64* rng = nullptr);
PatternRun run_pattern(const QubitState& psi, const MeasurementPattern& pattern,
                       std::mt19937_64* rng = nullptr);

// Projects the first vertex of a line state onto phi; returns the projection
// basis (phi first) and the state left on the second vertex, H conj(phi).
struct EncodedInput {
  std::vector<Vec> basis;
  QubitState encoded;
};
EncodedInput encode_input_by_measurement(const QubitState& line, const Vec& phi);

// ------------------------------------------------------------------- gates

// Single-qubit unitary by name: I, X, Y, Z, H, S, RZ(pi/2), RX(pi/2), RX(-pi/2).
Mat named_gate(const std::string& name);

// (alpha, beta, gamma) on the three middle vertices of the five-qubit line
// for X, H and RZ(pi/2). Throws on other names.
std::array<double, 3> euler_angles(const std::string& gate);
// Single angle on the middle vertex of the three-vertex line for I, X,
// RX(pi/2), RX(-pi/2).
double rx_angle(const std::string& gate);

enum class Encoding { Physical, Logical };

// Five-qubit line (vertices 0..4): project 0 onto conj(psi), angles on 1, 2, 3,
// output 4.
MeasurementPattern line5_pattern(const std::array<double, 3>& angles, const Vec& psi,
                                 ByproductPolicy policy = ByproductPolicy::PostSelectZero);
// Three-vertex line: physical L3 (vertices 0, 1, 2) or the six-qubit
// repetition-encoded line with columns (0,1), (2,3), (4,5).
MeasurementPattern line3_pattern(double alpha, const Vec& psi, Encoding encoding,
                                 ByproductPolicy policy = ByproductPolicy::PostSelectZero);

// Output qubit state of a pattern run; logical outputs are decoded.
DensityOperator pattern_output_qubit(const PatternRun& run, const MeasurementPattern& pattern);

// ----------------------------------------------------- process tomography

struct ProcessTomography {
  Mat chi;                       // 4x4 in the basis I, X, Y, Z, trace 1
  double min_eigenvalue = 0.0;   // before clamping
  bool clamped = false;          // eigenvalues below -1e-6 were set to zero
};

using ChannelRunner = std::function<DensityOperator(const Vec& input)>;

// Linear inversion from the outputs for |0>, |1>, |+>, |+i>, with
// E(rho) = sum_mn chi_mn P_m rho P_n.
ProcessTomography process_tomography(const ChannelRunner& runner);
// Chi matrix of rho -> U rho U^dagger.
Mat chi_of_unitary(const Mat& u);
// Tr(chi_ideal chi).
double process_fidelity(const Mat& chi, const Mat& chi_ideal);

// ------------------------------------------------------------ teleportation

enum class BranchedCode { B3, B5, B7, Crazy6 };
enum class ErrorMode { OneQubit, TwoQubit, AllQubits };
enum class TeleportMethod { Analytic, DensityMatrix, Sampled, Detuned };
// Fail: an even split of the majority vote counts as fidelity 0.
// Half: ties are broken by a fair coin.
enum class TieRule { Fail, Half };

struct BranchedLayout {
  int num_qubits = 0;
  int input = 0;   // outer vertex projected onto conj(psi)
  int output = 0;  // outer vertex carrying the teleported state
  std::vector<int> middle;
  std::vector<std::vector<int>> photons;  // qubits per photon, A..D
};
BranchedLayout branched_layout(BranchedCode code);
QubitState branched_state(BranchedCode code);

struct TeleportOptions {
  ErrorMode mode = ErrorMode::AllQubits;
  double p = 0.0;
  Vec input;  // defaults to |+i> when empty
  TeleportMethod method = TeleportMethod::DensityMatrix;
  TieRule ties = TieRule::Fail;
  long long shots = 10000;  // Sampled only
  std::uint64_t seed = 1;   // Sampled only
  std::vector<int> lost;    // photons (0 = A .. 3 = D) traced out first
};

struct TeleportResult {
  double fidelity = 0.0;
  double std_error = 0.0;  // Sampled only
};

// Dephasing with probability p (or, for Detuned, middle measurements rotated
// by 2 asin(sqrt p)) on the first 1, 2 or all surviving middle qubits, X
// measurements of the survivors, majority decoding and an X correction on
// the output. Throws when a lost photon carries an outer qubit.
TeleportResult teleport_branched(BranchedCode code, const TeleportOptions& options);

// Binomial majority formula: k dephased qubits among `survivors`, fidelity
// P(errors < survivors / 2) plus half the tie mass under TieRule::Half.
double majority_fidelity(int survivors, int dephased, double p, TieRule ties = TieRule::Fail);

// B7 with one photon lost (0 = A, 2 = C, 3 = D), all survivors dephased.
TeleportResult loss_teleport(int lost_photon, double p, const Vec& input = Vec(),
                             TeleportMethod method = TeleportMethod::DensityMatrix,
                             TieRule ties = TieRule::Fail);

}  // namespace qg
