// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0

#include "qgraph/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "kernels.hpp"

namespace qg {

namespace {

void check_size(int n) {
  if (n < 0 || n > kMaxQubits) {
    throw Error("register of " + std::to_string(n) + " qubits exceeds the supported maximum of " +
                std::to_string(kMaxQubits));
  }
}

int log2_exact(Eigen::Index d) {
  int k = 0;
  while ((Eigen::Index{1} << k) < d) ++k;
  if ((Eigen::Index{1} << k) != d) throw Error("dimension is not a power of two");
  return k;
}

std::vector<int> remaining(int n, const std::vector<int>& targets) {
  std::vector<int> rest;
  for (int q = 0; q < n; ++q) {
    if (std::find(targets.begin(), targets.end(), q) == targets.end()) rest.push_back(q);
  }
  return rest;
}

int sample(const std::vector<double>& probs, std::mt19937_64& rng) {
  std::discrete_distribution<int> dist(probs.begin(), probs.end());
  return dist(rng);
}

}  // namespace

// ---------------------------------------------------------------- QubitState

QubitState::QubitState(int n) : n_(n) {
  check_size(n);
  amps_ = Vec::Zero(static_cast<Eigen::Index>(dim()));
  amps_(0) = 1.0;
}

QubitState::QubitState(int n, Vec amplitudes) : n_(n), amps_(std::move(amplitudes)) {
  check_size(n);
  if (amps_.size() != static_cast<Eigen::Index>(dim())) throw Error("amplitude count does not match 2^n");
  const double norm = amps_.norm();
  if (norm < 1e-300) throw Error("cannot normalize a zero state");
  amps_ /= norm;
}

QubitState QubitState::basis(int n, std::uint64_t index) {
  QubitState s(n);
  if (index >= s.dim()) throw Error("basis index out of range");
  s.amps_(0) = 0.0;
  s.amps_(static_cast<Eigen::Index>(index)) = 1.0;
  return s;
}

QubitState QubitState::product(const std::vector<Vec>& factors) {
  Vec v = Vec::Ones(1);
  int n = 0;
  for (const auto& f : factors) {
    n += log2_exact(f.size());
    Vec next(v.size() * f.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) next.segment(i * f.size(), f.size()) = v(i) * f;
    v = std::move(next);
  }
  return QubitState(n, v);
}

QubitState QubitState::tensor(const QubitState& other) const {
  return product({amps_, other.amps_});
}

// ----------------------------------------------------------- DensityOperator

DensityOperator::DensityOperator(const QubitState& psi)
    : n_(psi.num_qubits()), m_(psi.amplitudes() * psi.amplitudes().adjoint()) {}

DensityOperator::DensityOperator(int n, Mat m, bool validate) : n_(n), m_(std::move(m)) {
  check_size(n);
  const auto d = static_cast<Eigen::Index>(dim());
  if (m_.rows() != d || m_.cols() != d) throw Error("density matrix has the wrong shape");
  const double tr = m_.trace().real();
  if (tr < 1e-300) throw Error("density matrix has zero trace");
  m_ /= tr;
  if (validate) {
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw Error("density matrix is not Hermitian");
    if (min_eigenvalue() < -1e-8) throw Error("density matrix is not positive semidefinite");
  }
  // Remove rounding asymmetry so downstream eigen-solvers see exact Hermitian input.
  m_ = 0.5 * (m_ + m_.adjoint()).eval();
}

DensityOperator DensityOperator::maximally_mixed(int n) {
  check_size(n);
  const auto d = static_cast<Eigen::Index>(std::uint64_t{1} << n);
  return DensityOperator(n, Mat::Identity(d, d), false);
}

DensityOperator DensityOperator::mixture(const std::vector<double>& weights,
                                         const std::vector<DensityOperator>& parts) {
  if (weights.size() != parts.size() || parts.empty()) throw Error("mixture needs matching weights and parts");
  Mat acc = Mat::Zero(parts[0].matrix().rows(), parts[0].matrix().cols());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].num_qubits() != parts[0].num_qubits()) throw Error("mixture of different register sizes");
    if (weights[i] < 0) throw Error("negative mixture weight");
    acc += weights[i] * parts[i].matrix();
  }
  return DensityOperator(parts[0].num_qubits(), acc, false);
}

double DensityOperator::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// -------------------------------------------------------------------- gates

namespace gates {

Mat I2() { return Mat::Identity(2, 2); }

Mat X() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Mat Y() {
  Mat m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

Mat Z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Mat H() {
  Mat m(2, 2);
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}

Mat S() { return RZ(kPi / 2); }

Mat RZ(double theta) {
  Mat m = Mat::Identity(2, 2);
  m(1, 1) = std::exp(kI * theta);
  return m;
}

Mat RX(double theta) { return H() * RZ(theta) * H(); }

Mat CZ() { return CkZ(2); }

Mat CX() {
  Mat m = Mat::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
  return m;
}

Mat SWAP() {
  Mat m = Mat::Zero(4, 4);
  m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
  return m;
}

Mat CkZ(int k) {
  const auto d = Eigen::Index{1} << k;
  Mat m = Mat::Identity(d, d);
  m(d - 1, d - 1) = -1;
  return m;
}

Mat sqrt_minus_iX() { return (I2() - kI * X()) / std::sqrt(2.0); }

Mat sqrt_iZ() {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = std::exp(kI * kPi / 4.0);
  m(1, 1) = std::exp(-kI * kPi / 4.0);
  return m;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace gates

namespace kets {
Vec zero() { return Vec::Unit(2, 0); }
Vec one() { return Vec::Unit(2, 1); }
Vec plus() { return (zero() + one()) / std::sqrt(2.0); }
Vec minus() { return (zero() - one()) / std::sqrt(2.0); }
Vec plus_i() { return (zero() + kI * one()) / std::sqrt(2.0); }
Vec minus_i() { return (zero() - kI * one()) / std::sqrt(2.0); }
}  // namespace kets

// --------------------------------------------------------------- validation

void check_unitary(const Mat& u, double tol) {
  if (u.rows() != u.cols()) throw Error("gate is not square");
  const Mat err = u.adjoint() * u - Mat::Identity(u.rows(), u.cols());
  if (err.cwiseAbs().maxCoeff() > tol) throw Error("gate is not unitary");
}

void check_basis(const std::vector<Vec>& basis, int k, double tol) {
  const auto d = Eigen::Index{1} << k;
  if (static_cast<Eigen::Index>(basis.size()) != d) throw Error("basis size does not match the measured qubits");
  Mat b(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (basis[static_cast<std::size_t>(i)].size() != d) throw Error("basis vector has the wrong dimension");
    b.col(i) = basis[static_cast<std::size_t>(i)];
  }
  check_unitary(b, tol);
}

// ---------------------------------------------------------------- evolution

QubitState apply_unitary(const QubitState& psi, const Mat& gate, const std::vector<int>& targets) {
  detail::check_targets(psi.num_qubits(), targets);
  if (gate.rows() != (Eigen::Index{1} << targets.size())) throw Error("gate size does not match target count");
  check_unitary(gate);
  Vec v = psi.amplitudes();
  detail::apply_gate(v.data(), psi.num_qubits(), gate, targets);
  return QubitState(psi.num_qubits(), v);
}

DensityOperator apply_unitary(const DensityOperator& rho, const Mat& gate,
                              const std::vector<int>& targets) {
  const int n = rho.num_qubits();
  detail::check_targets(n, targets);
  if (gate.rows() != (Eigen::Index{1} << targets.size())) throw Error("gate size does not match target count");
  check_unitary(gate);
  // Column-major storage: the column index occupies the high n bits.
  Mat m = rho.matrix();
  std::vector<int> rows, cols;
  for (int t : targets) {
    rows.push_back(n + t);
    cols.push_back(t);
  }
  detail::apply_gate(m.data(), 2 * n, gate, rows);
  detail::apply_gate(m.data(), 2 * n, gate.conjugate(), cols);
  return DensityOperator(n, m, false);
}

DensityOperator apply_channel(const DensityOperator& rho, const std::vector<Mat>& kraus,
                              const std::vector<int>& targets) {
  const int n = rho.num_qubits();
  detail::check_targets(n, targets);
  const auto d = Eigen::Index{1} << targets.size();
  Mat completeness = Mat::Zero(d, d);
  for (const auto& k : kraus) {
    if (k.rows() != d || k.cols() != d) throw Error("Kraus operator has the wrong size");
    completeness += k.adjoint() * k;
  }
  if ((completeness - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10) {
    throw Error("Kraus operators are not trace preserving");
  }
  std::vector<int> rows, cols;
  for (int t : targets) {
    rows.push_back(n + t);
    cols.push_back(t);
  }
  Mat acc = Mat::Zero(rho.matrix().rows(), rho.matrix().cols());
  for (const auto& k : kraus) {
    Mat m = rho.matrix();
    detail::apply_gate(m.data(), 2 * n, k, rows);
    detail::apply_gate(m.data(), 2 * n, k.conjugate(), cols);
    acc += m;
  }
  return DensityOperator(n, acc, false);
}

DensityOperator dephase(const DensityOperator& rho, int qubit, double p) {
  if (p < 0 || p > 1) throw Error("dephasing probability outside [0, 1]");
  return apply_channel(rho, {std::sqrt(1 - p) * gates::I2(), std::sqrt(p) * gates::Z()}, {qubit});
}

// -------------------------------------------------------------- measurement

Vec project_out(const QubitState& psi, const Vec& v, const std::vector<int>& targets) {
  detail::check_targets(psi.num_qubits(), targets);
  if (v.size() != (Eigen::Index{1} << targets.size())) throw Error("projector size does not match target count");
  return detail::contract(psi.amplitudes().data(), psi.num_qubits(), targets, v.conjugate());
}

Mat project_out(const DensityOperator& rho, const Vec& v, const std::vector<int>& targets) {
  const int n = rho.num_qubits();
  detail::check_targets(n, targets);
  const int k = static_cast<int>(targets.size());
  if (v.size() != (Eigen::Index{1} << k)) throw Error("projector size does not match target count");
  // Contract the column bits with v, then the row bits with conj(v).
  Vec cols = detail::contract(rho.matrix().data(), 2 * n, targets, v);
  std::vector<int> rows;
  for (int t : targets) rows.push_back((n - k) + t);
  Vec both = detail::contract(cols.data(), 2 * n - k, rows, v.conjugate());
  const auto d = Eigen::Index{1} << (n - k);
  return Eigen::Map<Mat>(both.data(), d, d);
}

std::vector<double> outcome_probabilities(const QubitState& psi, const std::vector<Vec>& basis,
                                          const std::vector<int>& targets) {
  check_basis(basis, static_cast<int>(targets.size()));
  std::vector<double> p;
  for (const auto& v : basis) p.push_back(project_out(psi, v, targets).squaredNorm());
  return p;
}

std::vector<double> outcome_probabilities(const DensityOperator& rho,
                                          const std::vector<Vec>& basis,
                                          const std::vector<int>& targets) {
  check_basis(basis, static_cast<int>(targets.size()));
  std::vector<double> p;
  for (const auto& v : basis) p.push_back(std::max(0.0, project_out(rho, v, targets).trace().real()));
  return p;
}

Measurement measure_projective(const QubitState& psi, const std::vector<Vec>& basis,
                               const std::vector<int>& targets, int forced_outcome) {
  check_basis(basis, static_cast<int>(targets.size()));
  if (forced_outcome < 0 || forced_outcome >= static_cast<int>(basis.size())) throw Error("outcome index out of range");
  Vec rest = project_out(psi, basis[static_cast<std::size_t>(forced_outcome)], targets);
  const double p = rest.squaredNorm();
  if (p < 1e-12) throw Error("forced measurement outcome has negligible probability");
  const int left = psi.num_qubits() - static_cast<int>(targets.size());
  return {forced_outcome, p, QubitState(left, rest)};
}

Measurement measure_projective(const QubitState& psi, const std::vector<Vec>& basis,
                               const std::vector<int>& targets, std::mt19937_64& rng) {
  return measure_projective(psi, basis, targets, sample(outcome_probabilities(psi, basis, targets), rng));
}

MixedMeasurement measure_projective(const DensityOperator& rho, const std::vector<Vec>& basis,
                                    const std::vector<int>& targets, int forced_outcome) {
  check_basis(basis, static_cast<int>(targets.size()));
  if (forced_outcome < 0 || forced_outcome >= static_cast<int>(basis.size())) throw Error("outcome index out of range");
  Mat rest = project_out(rho, basis[static_cast<std::size_t>(forced_outcome)], targets);
  const double p = rest.trace().real();
  if (p < 1e-12) throw Error("forced measurement outcome has negligible probability");
  const int left = rho.num_qubits() - static_cast<int>(targets.size());
  return {forced_outcome, p, DensityOperator(left, rest, false)};
}

MixedMeasurement measure_projective(const DensityOperator& rho, const std::vector<Vec>& basis,
                                    const std::vector<int>& targets, std::mt19937_64& rng) {
  return measure_projective(rho, basis, targets, sample(outcome_probabilities(rho, basis, targets), rng));
}

// ------------------------------------------------------------- reordering

namespace {

std::vector<std::uint64_t> permutation_map(int n, const std::vector<int>& order) {
  if (static_cast<int>(order.size()) != n) throw Error("qubit order has the wrong length");
  detail::check_targets(n, order);
  const auto dim = std::uint64_t{1} << n;
  std::vector<std::uint64_t> map(dim);
  for (std::uint64_t j = 0; j < dim; ++j) {
    std::uint64_t i = 0;
    for (int k = 0; k < n; ++k) {
      if ((j >> (n - 1 - k)) & 1U) i |= std::uint64_t{1} << (n - 1 - order[static_cast<std::size_t>(k)]);
    }
    map[j] = i;
  }
  return map;
}

}  // namespace

QubitState permute_qubits(const QubitState& psi, const std::vector<int>& order) {
  const auto map = permutation_map(psi.num_qubits(), order);
  Vec out(psi.amplitudes().size());
  for (std::uint64_t j = 0; j < map.size(); ++j) out(static_cast<Eigen::Index>(j)) = psi[map[j]];
  return QubitState(psi.num_qubits(), out);
}

DensityOperator permute_qubits(const DensityOperator& rho, const std::vector<int>& order) {
  const auto map = permutation_map(rho.num_qubits(), order);
  const auto d = static_cast<Eigen::Index>(map.size());
  Mat out(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      out(r, c) = rho.matrix()(static_cast<Eigen::Index>(map[static_cast<std::size_t>(r)]),
                               static_cast<Eigen::Index>(map[static_cast<std::size_t>(c)]));
    }
  }
  return DensityOperator(rho.num_qubits(), out, false);
}

// ------------------------------------------------------------------ figures

double fidelity(const QubitState& a, const QubitState& b) {
  if (a.num_qubits() != b.num_qubits()) throw Error("fidelity of states with different sizes");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

double fidelity(const DensityOperator& rho, const QubitState& psi) {
  if (rho.num_qubits() != psi.num_qubits()) throw Error("fidelity of states with different sizes");
  const double f = (psi.amplitudes().adjoint() * rho.matrix() * psi.amplitudes())(0).real();
  return std::clamp(f, 0.0, 1.0);
}

double purity(const DensityOperator& rho) {
  return (rho.matrix() * rho.matrix()).trace().real();
}

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep) {
  const int n = rho.num_qubits();
  if (keep.empty()) throw Error("partial trace must keep at least one qubit");
  detail::check_targets(n, keep);
  std::vector<int> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != keep) throw Error("kept qubits must be listed in ascending order");
  const auto traced = remaining(n, keep);
  if (traced.empty()) return rho;
  const auto d = Eigen::Index{1} << (n - static_cast<int>(traced.size()));
  Mat acc = Mat::Zero(d, d);
  const auto count = Eigen::Index{1} << traced.size();
  for (Eigen::Index a = 0; a < count; ++a) acc += project_out(rho, Vec::Unit(count, a), traced);
  return DensityOperator(n - static_cast<int>(traced.size()), acc, false);
}

// ------------------------------------------------------------------- bases

std::vector<Vec> computational_basis(int k) {
  const auto d = Eigen::Index{1} << k;
  std::vector<Vec> b;
  for (Eigen::Index i = 0; i < d; ++i) b.push_back(Vec::Unit(d, i));
  return b;
}

std::vector<Vec> pauli_basis(char axis) {
  switch (axis) {
    case 'X': return {kets::plus(), kets::minus()};
    case 'Y': return {kets::plus_i(), kets::minus_i()};
    case 'Z': return {kets::zero(), kets::one()};
    default: throw Error(std::string("unknown Pauli axis ") + axis);
  }
}

std::vector<Vec> equatorial_basis(double theta) {
  const cplx ph = std::exp(kI * theta);
  Vec a(2), b(2);
  a << 1, ph;
  b << 1, -ph;
  return {a / std::sqrt(2.0), b / std::sqrt(2.0)};
}

std::vector<Vec> bell_basis() {
  const double r = 1 / std::sqrt(2.0);
  Vec a = Vec::Zero(4), b = Vec::Zero(4), c = Vec::Zero(4), d = Vec::Zero(4);
  a(0) = r, a(3) = r;
  b(0) = r, b(3) = -r;
  c(1) = r, c(2) = r;
  d(1) = r, d(2) = -r;
  return {a, b, c, d};
}

}  // namespace qg
