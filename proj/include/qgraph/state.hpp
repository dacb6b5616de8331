// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0
//
// Dense state vectors and density operators over qubit registers.
//
// Ordering is big-endian: qubit 0 is the leftmost tensor factor, so the
// basis index of |q0 q1 ... q_{n-1}> is sum_k q_k 2^(n-1-k). Qubit 0 here is
// qubit 1 in the usual one-based lab labelling.

#pragma once

#include <random>
#include <vector>

#include "qgraph/types.hpp"

namespace qg {

class QubitState {
 public:
  // |0...0> on n qubits. n = 0 is the trivial one-dimensional register.
  explicit QubitState(int n = 0);
  // Normalizes the supplied amplitudes; throws on a zero vector.
  QubitState(int n, Vec amplitudes);

  static QubitState basis(int n, std::uint64_t index);
  static QubitState product(const std::vector<Vec>& factors);

  int num_qubits() const { return n_; }
  std::uint64_t dim() const { return std::uint64_t{1} << n_; }
  const Vec& amplitudes() const { return amps_; }
  cplx operator[](std::uint64_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

  QubitState tensor(const QubitState& other) const;

 private:
  int n_;
  Vec amps_;
};

class DensityOperator {
 public:
  explicit DensityOperator(const QubitState& psi);
  // Trace-normalizes m. With validate, also checks Hermiticity and
  // positivity (min eigenvalue >= -1e-8).
  DensityOperator(int n, Mat m, bool validate = true);

  static DensityOperator maximally_mixed(int n);
  // Convex combination sum_k w_k rho_k, weights renormalized.
  static DensityOperator mixture(const std::vector<double>& weights,
                                 const std::vector<DensityOperator>& parts);

  int num_qubits() const { return n_; }
  std::uint64_t dim() const { return std::uint64_t{1} << n_; }
  const Mat& matrix() const { return m_; }
  double min_eigenvalue() const;

 private:
  int n_;
  Mat m_;
};

namespace gates {
Mat I2();
Mat X();
Mat Y();
Mat Z();
Mat H();
Mat S();
// diag(1, e^{i theta})
Mat RZ(double theta);
// H RZ(theta) H; equals exp(-i theta X / 2) up to a global phase.
Mat RX(double theta);
Mat CZ();
Mat CX();
Mat SWAP();
// Diagonal C^kZ on k qubits: flips the sign of |1...1>.
Mat CkZ(int k);
// exp(-i pi/4 X) and exp(i pi/4 Z), the local-complementation factors.
Mat sqrt_minus_iX();
Mat sqrt_iZ();
Mat kron(const Mat& a, const Mat& b);
}  // namespace gates

namespace kets {
Vec zero();
Vec one();
Vec plus();
Vec minus();
Vec plus_i();
Vec minus_i();
}  // namespace kets

void check_unitary(const Mat& u, double tol = 1e-10);
// Throws unless the vectors form an orthonormal basis of dimension 2^k.
void check_basis(const std::vector<Vec>& basis, int k, double tol = 1e-10);

QubitState apply_unitary(const QubitState& psi, const Mat& gate, const std::vector<int>& targets);
DensityOperator apply_unitary(const DensityOperator& rho, const Mat& gate,
                              const std::vector<int>& targets);
// Kraus map on the target qubits; sum K^dagger K = I is checked.
DensityOperator apply_channel(const DensityOperator& rho, const std::vector<Mat>& kraus,
                              const std::vector<int>& targets);
DensityOperator dephase(const DensityOperator& rho, int qubit, double p);

struct Measurement {
  int outcome = 0;
  double probability = 0.0;
  QubitState post;  // over the unmeasured qubits, original order kept
};

struct MixedMeasurement {
  int outcome = 0;
  double probability = 0.0;
  DensityOperator post{QubitState(0)};
};

std::vector<double> outcome_probabilities(const QubitState& psi, const std::vector<Vec>& basis,
                                          const std::vector<int>& targets);
std::vector<double> outcome_probabilities(const DensityOperator& rho,
                                          const std::vector<Vec>& basis,
                                          const std::vector<int>& targets);

// Forced outcome: throws when its probability is below 1e-12.
Measurement measure_projective(const QubitState& psi, const std::vector<Vec>& basis,
                               const std::vector<int>& targets, int forced_outcome);
Measurement measure_projective(const QubitState& psi, const std::vector<Vec>& basis,
                               const std::vector<int>& targets, std::mt19937_64& rng);
MixedMeasurement measure_projective(const DensityOperator& rho, const std::vector<Vec>& basis,
                                    const std::vector<int>& targets, int forced_outcome);
MixedMeasurement measure_projective(const DensityOperator& rho, const std::vector<Vec>& basis,
                                    const std::vector<int>& targets, std::mt19937_64& rng);

// <v| on the targets applied to psi, unnormalized; result over the rest.
Vec project_out(const QubitState& psi, const Vec& v, const std::vector<int>& targets);
// (<v| x I) rho (|v> x I), unnormalized.
Mat project_out(const DensityOperator& rho, const Vec& v, const std::vector<int>& targets);

// Result qubit k is input qubit order[k]; order must be a permutation.
QubitState permute_qubits(const QubitState& psi, const std::vector<int>& order);
DensityOperator permute_qubits(const DensityOperator& rho, const std::vector<int>& order);

double fidelity(const QubitState& a, const QubitState& b);
double fidelity(const DensityOperator& rho, const QubitState& psi);
double purity(const DensityOperator& rho);
DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep);

// Z-basis projectors |0>,|1> and the like, as basis lists.
std::vector<Vec> computational_basis(int k);
std::vector<Vec> pauli_basis(char axis);  // 'X', 'Y' or 'Z', +1 eigenvector first
// {(|0> + e^{i theta}|1>)/sqrt2, (|0> - e^{i theta}|1>)/sqrt2}
std::vector<Vec> equatorial_basis(double theta);
// (|00>+|11>, |00>-|11>, |01>+|10>, |01>-|10>) / sqrt2
std::vector<Vec> bell_basis();

}  // namespace qg
