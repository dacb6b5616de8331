// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0

#include "qgraph/pauli.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace qg {

namespace {

struct Product {
  std::uint8_t letter;
  int phase;
};

// a * b for single-qubit Paulis in I, X, Y, Z order.
constexpr Product kTable[4][4] = {
    {{0, 0}, {1, 0}, {2, 0}, {3, 0}},
    {{1, 0}, {0, 0}, {3, 1}, {2, 3}},
    {{2, 0}, {3, 3}, {0, 0}, {1, 1}},
    {{3, 0}, {2, 1}, {1, 3}, {0, 0}},
};

cplx ipow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return 1.0;
    case 1: return kI;
    case 2: return -1.0;
    default: return -kI;
  }
}

struct Masks {
  std::uint64_t x = 0, z = 0;
  int y_count = 0;
};

Masks masks(const PauliString& p) {
  Masks m;
  const int n = p.size();
  for (int q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
    const auto l = p.letter(q);
    if (l == PauliString::X || l == PauliString::Y) m.x |= bit;
    if (l == PauliString::Z || l == PauliString::Y) m.z |= bit;
    if (l == PauliString::Y) ++m.y_count;
  }
  return m;
}

}  // namespace

PauliString::PauliString(std::vector<std::uint8_t> letters, int phase)
    : letters_(std::move(letters)), phase_(((phase % 4) + 4) % 4) {
  for (auto l : letters_) {
    if (l > 3) throw Error("Pauli letter out of range");
  }
}

PauliString PauliString::parse(const std::string& text) {
  std::size_t pos = 0;
  int phase = 0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    if (text[pos] == '-') phase = 2;
    ++pos;
  }
  if (pos < text.size() && text[pos] == 'i') {
    phase += 1;
    ++pos;
  }
  std::vector<std::uint8_t> letters;
  for (; pos < text.size(); ++pos) {
    switch (text[pos]) {
      case 'I': letters.push_back(I); break;
      case 'X': letters.push_back(X); break;
      case 'Y': letters.push_back(Y); break;
      case 'Z': letters.push_back(Z); break;
      default: throw Error("cannot parse Pauli string '" + text + "'");
    }
  }
  return PauliString(letters, phase);
}

PauliString PauliString::single(int n, int qubit, Letter letter) {
  if (qubit < 0 || qubit >= n) throw Error("Pauli qubit index out of range");
  PauliString p(n);
  p.set(qubit, letter);
  return p;
}

cplx PauliString::coefficient() const { return ipow(phase_); }

bool PauliString::is_identity() const {
  for (auto l : letters_) {
    if (l != I) return false;
  }
  return true;
}

int PauliString::weight() const {
  int w = 0;
  for (auto l : letters_) w += (l != I);
  return w;
}

bool PauliString::commutes_with(const PauliString& other) const {
  if (size() != other.size()) throw Error("Pauli length mismatch");
  int anti = 0;
  for (int q = 0; q < size(); ++q) {
    const auto a = letter(q), b = other.letter(q);
    anti += (a != I && b != I && a != b);
  }
  return anti % 2 == 0;
}

PauliString PauliString::operator*(const PauliString& other) const {
  if (size() != other.size()) throw Error("Pauli length mismatch");
  std::vector<std::uint8_t> out(letters_.size());
  int phase = phase_ + other.phase_;
  for (std::size_t q = 0; q < letters_.size(); ++q) {
    const auto& pr = kTable[letters_[q]][other.letters_[q]];
    out[q] = pr.letter;
    phase += pr.phase;
  }
  return PauliString(out, phase);
}

PauliString PauliString::operator-() const { return PauliString(letters_, phase_ + 2); }

bool PauliString::operator<(const PauliString& other) const {
  if (letters_ != other.letters_) return letters_ < other.letters_;
  return phase_ < other.phase_;
}

std::string PauliString::letters_string() const {
  static const char kNames[] = "IXYZ";
  std::string s;
  for (auto l : letters_) s += kNames[l];
  return s;
}

std::string PauliString::to_string() const {
  static const char* kSigns[] = {"", "i", "-", "-i"};
  return kSigns[phase_] + letters_string();
}

Mat PauliString::matrix() const {
  Mat m = Mat::Identity(1, 1);
  for (auto l : letters_) {
    Mat s = l == X ? gates::X() : l == Y ? gates::Y() : l == Z ? gates::Z() : gates::I2();
    m = gates::kron(m, s);
  }
  return coefficient() * m;
}

// ---------------------------------------------------------------- evaluation

cplx pauli_matrix_element(const QubitState& psi, const PauliString& p) {
  if (psi.num_qubits() != p.size()) throw Error("Pauli length does not match the register");
  const auto m = masks(p);
  const cplx base = ipow(p.phase() + m.y_count);
  const auto& a = psi.amplitudes();
  cplx acc = 0.0;
  for (std::uint64_t c = 0; c < psi.dim(); ++c) {
    const double sign = (std::popcount(c & m.z) % 2) ? -1.0 : 1.0;
    acc += std::conj(a(static_cast<Eigen::Index>(c ^ m.x))) * sign * a(static_cast<Eigen::Index>(c));
  }
  return base * acc;
}

cplx pauli_trace(const DensityOperator& rho, const PauliString& p) {
  if (rho.num_qubits() != p.size()) throw Error("Pauli length does not match the register");
  const auto m = masks(p);
  const cplx base = ipow(p.phase() + m.y_count);
  const auto& r = rho.matrix();
  cplx acc = 0.0;
  for (std::uint64_t b = 0; b < rho.dim(); ++b) {
    const double sign = (std::popcount(b & m.z) % 2) ? -1.0 : 1.0;
    acc += sign * r(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b ^ m.x));
  }
  return base * acc;
}

double pauli_expectation(const QubitState& psi, const PauliString& p) {
  if (!p.is_hermitian()) throw Error("expectation of a non-Hermitian Pauli string");
  return pauli_matrix_element(psi, p).real();
}

double pauli_expectation(const DensityOperator& rho, const PauliString& p) {
  if (!p.is_hermitian()) throw Error("expectation of a non-Hermitian Pauli string");
  return pauli_trace(rho, p).real();
}

QubitState apply_pauli(const QubitState& psi, const PauliString& p) {
  if (psi.num_qubits() != p.size()) throw Error("Pauli length does not match the register");
  const auto m = masks(p);
  const cplx base = ipow(p.phase() + m.y_count);
  Vec out(psi.amplitudes().size());
  for (std::uint64_t c = 0; c < psi.dim(); ++c) {
    const double sign = (std::popcount(c & m.z) % 2) ? -1.0 : 1.0;
    out(static_cast<Eigen::Index>(c ^ m.x)) = base * sign * psi[c];
  }
  return QubitState(psi.num_qubits(), out);
}

// ------------------------------------------------------------------ PauliSum

PauliSum::PauliSum(const PauliString& p) : n_(p.size()) { add(p); }

PauliSum PauliSum::identity(int n) { return PauliSum(PauliString(n)); }

void PauliSum::add(const PauliString& p, cplx coef) {
  if (p.size() != n_) throw Error("Pauli length mismatch in sum");
  terms_[p.letters()] += coef * p.coefficient();
}

PauliSum PauliSum::operator*(const PauliSum& other) const {
  if (n_ != other.n_) throw Error("Pauli length mismatch in sum");
  PauliSum out(n_);
  for (const auto& [la, ca] : terms_) {
    for (const auto& [lb, cb] : other.terms_) out.add(PauliString(la) * PauliString(lb), ca * cb);
  }
  out.prune();
  return out;
}

PauliSum PauliSum::operator+(const PauliSum& other) const {
  if (n_ != other.n_) throw Error("Pauli length mismatch in sum");
  PauliSum out = *this;
  for (const auto& [l, c] : other.terms_) out.terms_[l] += c;
  out.prune();
  return out;
}

PauliSum PauliSum::operator*(cplx s) const {
  PauliSum out = *this;
  for (auto& [l, c] : out.terms_) c *= s;
  return out;
}

void PauliSum::prune(double tol) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    it = std::abs(it->second) < tol ? terms_.erase(it) : std::next(it);
  }
}

bool PauliSum::is_single_pauli() const {
  if (terms_.size() != 1) return false;
  const cplx c = terms_.begin()->second;
  for (int k = 0; k < 4; ++k) {
    if (std::abs(c - ipow(k)) < 1e-12) return true;
  }
  return false;
}

std::vector<std::pair<cplx, PauliString>> PauliSum::expanded() const {
  std::vector<std::pair<cplx, PauliString>> out;
  for (const auto& [l, c] : terms_) out.emplace_back(c, PauliString(l));
  return out;
}

std::string PauliSum::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [l, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real();
    if (std::abs(c.imag()) > 1e-12) os << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i";
    os << ")" << PauliString(l).letters_string();
  }
  return os.str();
}

cplx expectation(const QubitState& psi, const PauliSum& s) {
  cplx acc = 0.0;
  for (const auto& [l, c] : s.terms()) acc += c * pauli_matrix_element(psi, PauliString(l));
  return acc;
}

cplx expectation(const DensityOperator& rho, const PauliSum& s) {
  cplx acc = 0.0;
  for (const auto& [l, c] : s.terms()) acc += c * pauli_trace(rho, PauliString(l));
  return acc;
}

}  // namespace qg
