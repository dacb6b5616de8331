// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "qgraph/state.hpp"

namespace qg {

// Signed tensor product of single-qubit Paulis: i^phase * P_0 x P_1 x ...
class PauliString {
 public:
  enum Letter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

  PauliString() = default;
  explicit PauliString(int n) : letters_(static_cast<std::size_t>(n), I) {}
  PauliString(std::vector<std::uint8_t> letters, int phase = 0);

  // Accepts an optional sign prefix (+, -, +i, -i, i) followed by IXYZ letters.
  static PauliString parse(const std::string& text);
  // Identity except `letter` on `qubit`.
  static PauliString single(int n, int qubit, Letter letter);

  int size() const { return static_cast<int>(letters_.size()); }
  int phase() const { return phase_; }  // exponent of i, in 0..3
  cplx coefficient() const;
  const std::vector<std::uint8_t>& letters() const { return letters_; }
  Letter letter(int q) const { return static_cast<Letter>(letters_[static_cast<std::size_t>(q)]); }
  void set(int q, Letter l) { letters_[static_cast<std::size_t>(q)] = l; }

  bool is_hermitian() const { return phase_ % 2 == 0; }
  bool is_identity() const;
  int weight() const;
  bool commutes_with(const PauliString& other) const;

  PauliString operator*(const PauliString& other) const;
  PauliString operator-() const;
  bool operator==(const PauliString& other) const = default;
  bool operator<(const PauliString& other) const;

  std::string to_string() const;  // e.g. "-XZZI"
  std::string letters_string() const;

  Mat matrix() const;

 private:
  std::vector<std::uint8_t> letters_;
  int phase_ = 0;
};

// Real expectation of a Hermitian Pauli string; throws on a length mismatch
// or a non-Hermitian phase.
double pauli_expectation(const QubitState& psi, const PauliString& p);
double pauli_expectation(const DensityOperator& rho, const PauliString& p);
// Complex <psi|P|psi>, valid for any phase.
cplx pauli_matrix_element(const QubitState& psi, const PauliString& p);
cplx pauli_trace(const DensityOperator& rho, const PauliString& p);
QubitState apply_pauli(const QubitState& psi, const PauliString& p);

// Linear combination of Pauli strings keyed by letters, phases folded into
// the coefficients.
class PauliSum {
 public:
  PauliSum() = default;
  explicit PauliSum(int n) : n_(n) {}
  explicit PauliSum(const PauliString& p);

  static PauliSum identity(int n);

  int size() const { return n_; }
  const std::map<std::vector<std::uint8_t>, cplx>& terms() const { return terms_; }
  void add(const PauliString& p, cplx coef = 1.0);
  PauliSum operator*(const PauliSum& other) const;
  PauliSum operator+(const PauliSum& other) const;
  PauliSum operator*(cplx s) const;
  void prune(double tol = 1e-12);
  bool is_single_pauli() const;
  // Terms with their coefficients as (coef, string with zero phase).
  std::vector<std::pair<cplx, PauliString>> expanded() const;

  std::string to_string() const;

 private:
  int n_ = 0;
  std::map<std::vector<std::uint8_t>, cplx> terms_;
};

cplx expectation(const QubitState& psi, const PauliSum& s);
cplx expectation(const DensityOperator& rho, const PauliSum& s);

}  // namespace qg
