// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0

#include "qgraph/mbqc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <Eigen/Eigenvalues>

#include "qgraph/graph.hpp"
#include "qgraph/named.hpp"

namespace qg {

namespace {

constexpr double kZeroMass = 1e-12;

Vec two(cplx a, cplx b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec kron_vec(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

// Tracks where original qubits sit after earlier measurements removed some.
class Register {
 public:
  explicit Register(int n) : pos_(n) {
    for (int q = 0; q < n; ++q) pos_[q] = q;
  }
  int at(int q) const {
    if (q < 0 || q >= static_cast<int>(pos_.size()) || pos_[q] < 0) {
      throw Error("pattern: qubit " + std::to_string(q) + " is not available");
    }
    return pos_[q];
  }
  std::vector<int> at(const std::vector<int>& qs) const {
    std::vector<int> out;
    for (int q : qs) out.push_back(at(q));
    return out;
  }
  void remove(const std::vector<int>& qs) {
    for (int q : qs) {
      const int p = at(q);
      pos_[q] = -1;
      for (int& other : pos_) {
        if (other > p) --other;
      }
    }
  }

 private:
  std::vector<int> pos_;
};

int sample_index(const std::vector<double>& probs, std::mt19937_64& rng) {
  std::discrete_distribution<int> d(probs.begin(), probs.end());
  return d(rng);
}

DensityOperator conjugate(const DensityOperator& rho, const Mat& gate, const std::vector<int>& qs) {
  return apply_unitary(rho, gate, qs);
}

const std::array<Mat, 4>& paulis() {
  static const std::array<Mat, 4> p = {gates::I2(), gates::X(), gates::Y(), gates::Z()};
  return p;
}

}  // namespace

std::vector<Vec> xy_basis(double theta) {
  const double r = 1.0 / std::sqrt(2.0);
  const cplx ph = std::exp(-kI * theta);
  return {two(r, r * ph), two(r, -r * ph)};
}

// ------------------------------------------------------------ logical bases

Vec logical_zero() {
  Vec v = Vec::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v;
}

Vec logical_one() {
  Vec v = Vec::Zero(4);
  v(1) = v(2) = 1.0 / std::sqrt(2.0);
  return v;
}

Vec encode_logical(const Vec& qubit) {
  if (qubit.size() != 2) throw Error("encode_logical: expected a qubit state");
  return qubit(0) * logical_zero() + qubit(1) * logical_one();
}

LogicalBasis logical_basis(LogicalKind kind, double theta) {
  const Vec plus = kets::plus();
  const Vec minus = kets::minus();
  LogicalBasis b;
  switch (kind) {
    case LogicalKind::Z:
      b.vectors = {logical_zero(), logical_one()};
      break;
    case LogicalKind::X:
      b.vectors = {kron_vec(plus, plus), kron_vec(minus, minus)};
      break;
    case LogicalKind::Y:
      b.vectors = {encode_logical(kets::plus_i()), encode_logical(kets::minus_i())};
      break;
    case LogicalKind::XY: {
      const auto q = xy_basis(theta);
      b.vectors = {encode_logical(q[0]), encode_logical(q[1])};
      break;
    }
  }
  b.vectors.push_back(kron_vec(plus, minus));
  b.vectors.push_back(kron_vec(minus, plus));
  check_basis(b.vectors, 2);
  return b;
}

LogicalDecode decode_logical(const DensityOperator& rho) {
  if (rho.num_qubits() != 2) throw Error("decode_logical: expected two qubits");
  Mat v(4, 2);
  v.col(0) = logical_zero();
  v.col(1) = logical_one();
  Mat m = v.adjoint() * rho.matrix() * v;
  LogicalDecode out;
  out.valid_weight = m.trace().real();
  if (out.valid_weight < kZeroMass) throw Error("decode_logical: no weight in the code space");
  out.logical = DensityOperator(1, m / out.valid_weight, false);
  return out;
}

// ---------------------------------------------------------------- patterns

void MeasurementPattern::validate() const {
  if (num_qubits <= 0 || num_qubits > kMaxQubits) throw Error("pattern: bad register size");
  std::set<int> seen;
  auto claim = [&](int q) {
    if (q < 0 || q >= num_qubits) throw Error("pattern: qubit out of range");
    if (!seen.insert(q).second) throw Error("pattern: qubit " + std::to_string(q) + " used twice");
  };
  for (const auto& s : steps) {
    const std::size_t want = s.kind == PatternStep::Kind::Logical ? 2 : s.kind == PatternStep::Kind::Project
                                                                         ? s.qubits.size()
                                                                         : 1;
    if (s.qubits.size() != want || s.qubits.empty()) throw Error("pattern: wrong group size for a step");
    if (s.kind == PatternStep::Kind::Project &&
        (s.qubits.size() > 2 || s.target.size() != (Eigen::Index{1} << s.qubits.size()))) {
      throw Error("pattern: projection target does not match its qubits");
    }
    for (int q : s.qubits) claim(q);
  }
  for (int q : outputs) claim(q);
  if (static_cast<int>(seen.size()) != num_qubits) throw Error("pattern: unassigned qubit");
  if (logical_output && outputs.size() != 2) throw Error("pattern: logical output needs two qubits");
  if (!logical_output && outputs.size() != 1) throw Error("pattern: expected one output qubit");
}

nlohmann::json MeasurementPattern::to_json() const {
  nlohmann::json j;
  j["num_qubits"] = num_qubits;
  j["outputs"] = outputs;
  j["logical_output"] = logical_output;
  j["policy"] = policy == ByproductPolicy::PostSelectZero ? "post-select-zero" : "track-and-correct";
  auto& arr = j["steps"] = nlohmann::json::array();
  for (const auto& s : steps) {
    nlohmann::json e;
    static const char* kinds[] = {"xy", "z", "logical", "project"};
    e["kind"] = kinds[static_cast<int>(s.kind)];
    e["qubits"] = s.qubits;
    if (s.kind == PatternStep::Kind::XY || s.kind == PatternStep::Kind::Logical) e["theta"] = s.theta;
    if (s.kind == PatternStep::Kind::Project) {
      nlohmann::json t = nlohmann::json::array();
      for (Eigen::Index i = 0; i < s.target.size(); ++i) t.push_back({s.target(i).real(), s.target(i).imag()});
      e["target"] = t;
    }
    arr.push_back(e);
  }
  return j;
}

PatternRun run_pattern(const DensityOperator& rho, const MeasurementPattern& pattern,
                       std::mt19937_64* rng) {
  pattern.validate();
  if (rho.num_qubits() != pattern.num_qubits) throw Error("run_pattern: state size does not match pattern");
  const bool track = pattern.policy == ByproductPolicy::TrackAndCorrect;
  if (track && rng == nullptr) throw Error("run_pattern: track-and-correct needs a generator");

  Register reg(pattern.num_qubits);
  DensityOperator cur = rho;
  PatternRun run;
  run.probability = 1.0;
  int fx = 0, fz = 0;  // Pauli frame X^fx Z^fz on the current line vertex

  for (const auto& s : pattern.steps) {
    const auto targets = reg.at(s.qubits);
    std::vector<Vec> basis;
    bool sampled = false;
    switch (s.kind) {
      case PatternStep::Kind::XY:
        basis = xy_basis(fx ? -s.theta : s.theta);
        sampled = track;
        break;
      case PatternStep::Kind::Logical:
        basis = logical_basis(LogicalKind::XY, fx ? -s.theta : s.theta).vectors;
        sampled = track;
        break;
      case PatternStep::Kind::Z:
        basis = computational_basis(1);
        break;
      case PatternStep::Kind::Project: {
        const Mat post = project_out(cur, s.target, targets);
        const double p = post.trace().real() / s.target.squaredNorm();
        if (p < kZeroMass) throw Error("run_pattern: zero-probability projection");
        cur = DensityOperator(cur.num_qubits() - static_cast<int>(targets.size()), post / post.trace().real(),
                              false);
        run.probability *= p;
        run.outcomes.push_back(0);
        reg.remove(s.qubits);
        continue;
      }
    }
    MixedMeasurement m = sampled ? measure_projective(cur, basis, targets, *rng)
                                 : measure_projective(cur, basis, targets, 0);
    run.outcomes.push_back(m.outcome);
    run.probability *= m.probability;
    cur = m.post;
    reg.remove(s.qubits);
    if (s.kind == PatternStep::Kind::Logical && !LogicalBasis::valid(m.outcome)) {
      run.discarded = true;
      run.output = cur;
      return run;
    }
    if (sampled) {
      const int nx = m.outcome ^ fz;
      fz = fx;
      fx = nx;
    }
  }

  const auto outs = reg.at(pattern.outputs);
  if (track) {
    if (pattern.logical_output) {
      if (fx) cur = conjugate(cur, gates::X(), {outs[0]});
      if (fz) cur = conjugate(cur, gates::kron(gates::Z(), gates::Z()), outs);
    } else {
      if (fx) cur = conjugate(cur, gates::X(), outs);
      if (fz) cur = conjugate(cur, gates::Z(), outs);
    }
  }
  run.output = permute_qubits(cur, outs);
  return run;
}

PatternRun run_pattern(const QubitState& psi, const MeasurementPattern& pattern, std::mt19937_64* rng) {
  return run_pattern(DensityOperator(psi), pattern, rng);
}

EncodedInput encode_input_by_measurement(const QubitState& line, const Vec& phi) {
  if (phi.size() != 2 || phi.norm() < kZeroMass) throw Error("encode_input: expected a qubit state");
  if (line.num_qubits() != 2) throw Error("encode_input: expected a two-vertex line");
  EncodedInput out;
  const Vec p = phi.normalized();
  out.basis = {p, two(-std::conj(p(1)), std::conj(p(0)))};
  out.encoded = measure_projective(line, out.basis, {0}, 0).post;
  return out;
}

// ------------------------------------------------------------------- gates

Mat named_gate(const std::string& name) {
  static const std::map<std::string, Mat> table = {
      {"I", gates::I2()},
      {"X", gates::X()},
      {"Y", gates::Y()},
      {"Z", gates::Z()},
      {"H", gates::H()},
      {"S", gates::S()},
      {"RZ(pi/2)", gates::RZ(kPi / 2)},
      {"RX(pi/2)", gates::RX(kPi / 2)},
      {"RX(-pi/2)", gates::RX(-kPi / 2)},
  };
  auto it = table.find(name);
  if (it == table.end()) throw Error("unknown gate: " + name);
  return it->second;
}

std::array<double, 3> euler_angles(const std::string& gate) {
  if (gate == "X") return {kPi, 0.0, 0.0};
  if (gate == "H") return {kPi / 2, kPi / 2, kPi / 2};
  if (gate == "RZ(pi/2)") return {0.0, kPi / 2, 0.0};
  throw Error("euler_angles: unsupported gate " + gate + "; pass raw angles instead");
}

double rx_angle(const std::string& gate) {
  if (gate == "I") return 0.0;
  if (gate == "X") return kPi;
  if (gate == "RX(pi/2)") return kPi / 2;
  if (gate == "RX(-pi/2)") return -kPi / 2;
  throw Error("rx_angle: unsupported gate " + gate + "; pass a raw angle instead");
}

MeasurementPattern line5_pattern(const std::array<double, 3>& angles, const Vec& psi,
                                 ByproductPolicy policy) {
  MeasurementPattern p;
  p.num_qubits = 5;
  p.policy = policy;
  p.steps.push_back({PatternStep::Kind::Project, {0}, 0.0, psi.normalized().conjugate()});
  for (int k = 0; k < 3; ++k) p.steps.push_back({PatternStep::Kind::XY, {k + 1}, angles[k], {}});
  p.outputs = {4};
  return p;
}

MeasurementPattern line3_pattern(double alpha, const Vec& psi, Encoding encoding, ByproductPolicy policy) {
  MeasurementPattern p;
  p.policy = policy;
  const Vec in = psi.normalized().conjugate();
  if (encoding == Encoding::Physical) {
    p.num_qubits = 3;
    p.steps.push_back({PatternStep::Kind::Project, {0}, 0.0, in});
    p.steps.push_back({PatternStep::Kind::XY, {1}, alpha, {}});
    p.outputs = {2};
  } else {
    p.num_qubits = 6;
    p.steps.push_back({PatternStep::Kind::Project, {0, 1}, 0.0, encode_logical(in)});
    p.steps.push_back({PatternStep::Kind::Logical, {2, 3}, alpha, {}});
    p.outputs = {4, 5};
    p.logical_output = true;
  }
  return p;
}

DensityOperator pattern_output_qubit(const PatternRun& run, const MeasurementPattern& pattern) {
  if (run.discarded) throw Error("pattern_output_qubit: run was discarded");
  return pattern.logical_output ? decode_logical(run.output).logical : run.output;
}

// ----------------------------------------------------- process tomography

ProcessTomography process_tomography(const ChannelRunner& runner) {
  const Mat r0 = runner(kets::zero()).matrix();
  const Mat r1 = runner(kets::one()).matrix();
  const Mat rp = runner(kets::plus()).matrix();
  const Mat ri = runner(kets::plus_i()).matrix();
  for (const Mat* m : {&r0, &r1, &rp, &ri}) {
    if (m->rows() != 2) throw Error("process_tomography: runner must return a qubit state");
  }
  // E(|i><j|) by linearity.
  const Mat e01 = rp + kI * ri - (1.0 + kI) / 2.0 * (r0 + r1);
  const Mat e10 = e01.adjoint();
  // Choi matrix J = sum_ij |i><j| (x) E(|i><j|).
  Mat j(4, 4);
  j.block(0, 0, 2, 2) = r0;
  j.block(0, 2, 2, 2) = e01;
  j.block(2, 0, 2, 2) = e10;
  j.block(2, 2, 2, 2) = r1;

  // chi_mn = <<P_m| J |P_n>> / 4 with |P>> = (I (x) P) sum_i |ii>.
  std::array<Vec, 4> vp;
  for (int m = 0; m < 4; ++m) {
    vp[m] = Vec::Zero(4);
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < 2; ++k) vp[m](2 * i + k) = paulis()[m](k, i);
    }
  }
  Mat chi(4, 4);
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) chi(m, n) = vp[m].dot(j * vp[n]) / 4.0;
  }
  chi = (chi + chi.adjoint()) / 2.0;
  chi /= chi.trace().real();

  ProcessTomography out;
  Eigen::SelfAdjointEigenSolver<Mat> es(chi);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  if (out.min_eigenvalue < -1e-6) {
    out.clamped = true;
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    chi = es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    chi /= chi.trace().real();
  }
  out.chi = chi;
  return out;
}

Mat chi_of_unitary(const Mat& u) {
  if (u.rows() != 2 || u.cols() != 2) throw Error("chi_of_unitary: expected a 2x2 unitary");
  check_unitary(u);
  Vec c(4);
  for (int m = 0; m < 4; ++m) c(m) = (paulis()[m].adjoint() * u).trace() / 2.0;
  return c * c.adjoint();
}

double process_fidelity(const Mat& chi, const Mat& chi_ideal) {
  return (chi_ideal * chi).trace().real();
}

// ------------------------------------------------------------ teleportation

BranchedLayout branched_layout(BranchedCode code) {
  BranchedLayout l;
  switch (code) {
    case BranchedCode::B3:
      // vertex 0 is chip qubit 1 (photon A), vertices 1 and 2 are photon B
      l.num_qubits = 3;
      l.input = 1;
      l.output = 2;
      l.middle = {0};
      l.photons = {{0}, {1, 2}};
      break;
    case BranchedCode::B5:
      l.num_qubits = 5;
      l.input = 2;
      l.output = 3;
      l.middle = {0, 1, 4};
      l.photons = {{0, 1}, {2, 3}, {4}};
      break;
    case BranchedCode::B7:
      l.num_qubits = 7;
      l.input = 2;
      l.output = 3;
      l.middle = {0, 1, 4, 5, 6};
      l.photons = {{0, 1}, {2, 3}, {4, 5}, {6}};
      break;
    case BranchedCode::Crazy6:
      l.num_qubits = 6;
      l.input = 2;
      l.output = 3;
      l.middle = {0, 1, 4, 5};
      l.photons = {{0, 1}, {2, 3}, {4, 5}};
      break;
  }
  return l;
}

namespace {

const char* code_name(BranchedCode code) {
  switch (code) {
    case BranchedCode::B3:
      return "B3";
    case BranchedCode::B5:
      return "B5";
    case BranchedCode::B7:
      return "B7";
    case BranchedCode::Crazy6:
      return "crazy6";
  }
  return "";
}

int dephased_count(ErrorMode mode, int survivors) {
  switch (mode) {
    case ErrorMode::OneQubit:
      return std::min(1, survivors);
    case ErrorMode::TwoQubit:
      return std::min(2, survivors);
    case ErrorMode::AllQubits:
      return survivors;
  }
  return survivors;
}

// Teleportation prepared up to the middle measurements: surviving register
// after loss and input projection, positions of the surviving middle qubits
// (designated ones first) and of the output.
struct Prepared {
  DensityOperator rho{QubitState(0)};
  std::vector<int> middle;
  int output = 0;
  int dephased = 0;
};

Prepared prepare(BranchedCode code, const TeleportOptions& o, const Vec& input, bool dephase_now) {
  const BranchedLayout l = branched_layout(code);
  std::vector<bool> lost(l.num_qubits, false);
  for (int ph : o.lost) {
    if (ph < 0 || ph >= static_cast<int>(l.photons.size())) throw Error("teleport: no such photon");
    for (int q : l.photons[ph]) {
      if (q == l.input || q == l.output) {
        throw Error("teleport: losing an outer-vertex photon is not supported");
      }
      lost[q] = true;
    }
  }
  std::vector<int> keep;
  for (int q = 0; q < l.num_qubits; ++q) {
    if (!lost[q]) keep.push_back(q);
  }
  auto index_of = [&](int q) {
    return static_cast<int>(std::find(keep.begin(), keep.end(), q) - keep.begin());
  };
  DensityOperator rho = partial_trace(DensityOperator(branched_state(code)), keep);

  Prepared out;
  std::vector<int> mid;
  for (int q : l.middle) {
    if (!lost[q]) mid.push_back(index_of(q));
  }
  if (mid.empty()) throw Error("teleport: no middle qubit survives");
  out.dephased = dephased_count(o.mode, static_cast<int>(mid.size()));
  if (dephase_now) {
    for (int k = 0; k < out.dephased; ++k) rho = dephase(rho, mid[k], o.p);
  }
  const int in = index_of(l.input);
  MixedMeasurement m = measure_projective(rho, {input.conjugate(), Vec(two(-input(1), input(0)))}, {in}, 0);
  for (int& q : mid) {
    if (q > in) --q;
  }
  out.output = index_of(l.output) - (index_of(l.output) > in ? 1 : 0);
  out.rho = m.post;
  out.middle = mid;
  return out;
}

Vec resolve_input(const Vec& v) {
  if (v.size() == 0) return kets::plus_i();
  if (v.size() != 2 || v.norm() < kZeroMass) throw Error("teleport: input must be a qubit state");
  return v.normalized();
}

// Fidelity credited to one decoded event given the X-outcome count.
double decode_credit(int ones, int n, const Mat& out, const Vec& psi, TieRule ties) {
  const double tr = out.trace().real();
  if (tr < kZeroMass) return 0.0;
  auto fid = [&](int s) {
    Vec v = s ? Vec(gates::X() * psi) : psi;
    return std::real(v.dot(out * v)) / tr;
  };
  if (2 * ones < n) return fid(0);
  if (2 * ones > n) return fid(1);
  return ties == TieRule::Fail ? 0.0 : 0.5 * (fid(0) + fid(1));
}

TeleportResult teleport_exact(BranchedCode code, const TeleportOptions& o, const Vec& psi, bool detuned) {
  const Prepared pr = prepare(code, o, psi, !detuned);
  const int n = static_cast<int>(pr.middle.size());
  const double delta = 2.0 * std::asin(std::sqrt(std::clamp(o.p, 0.0, 1.0)));
  std::vector<std::vector<Vec>> bases(n);
  for (int k = 0; k < n; ++k) bases[k] = (detuned && k < pr.dephased) ? xy_basis(delta) : pauli_basis('X');

  TeleportResult r;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    Vec v = Vec::Ones(1);
    int ones = 0;
    for (int k = 0; k < n; ++k) {
      const int b = (bits >> (n - 1 - k)) & 1;
      ones += b;
      v = kron_vec(v, bases[k][b]);
    }
    const Mat out = project_out(pr.rho, v, pr.middle);
    const double p = out.trace().real();
    if (p < kZeroMass) continue;
    r.fidelity += p * decode_credit(ones, n, out, psi, o.ties);
  }
  return r;
}

TeleportResult teleport_sampled(BranchedCode code, const TeleportOptions& o, const Vec& psi) {
  if (o.shots <= 0) throw Error("teleport: shots must be positive");
  const Prepared pr = prepare(code, o, psi, false);
  const int n = static_cast<int>(pr.middle.size());
  std::mt19937_64 rng(o.seed);
  std::bernoulli_distribution err(std::clamp(o.p, 0.0, 1.0));
  std::bernoulli_distribution coin(0.5);
  double sum = 0.0, sum2 = 0.0;
  for (long long shot = 0; shot < o.shots; ++shot) {
    DensityOperator rho = pr.rho;
    for (int k = 0; k < pr.dephased; ++k) {
      if (err(rng)) rho = apply_unitary(rho, gates::Z(), {pr.middle[k]});
    }
    // Sample the joint X outcome, qubit by qubit.
    Vec v = Vec::Ones(1);
    int ones = 0;
    for (int k = 0; k < n; ++k) {
      std::vector<int> prefix(pr.middle.begin(), pr.middle.begin() + k + 1);
      const Vec v0 = kron_vec(v, kets::plus());
      const Vec v1 = kron_vec(v, kets::minus());
      const double p0 = project_out(rho, v0, prefix).trace().real();
      const double p1 = project_out(rho, v1, prefix).trace().real();
      const int b = sample_index({p0, p1}, rng);
      ones += b;
      v = b ? v1 : v0;
    }
    const Mat out = project_out(rho, v, pr.middle);
    double f;
    if (o.ties == TieRule::Half && 2 * ones == n) {
      const int s = coin(rng) ? 1 : 0;
      const Vec w = s ? Vec(gates::X() * psi) : psi;
      f = std::real(w.dot(out * w)) / out.trace().real();
    } else {
      f = decode_credit(ones, n, out, psi, TieRule::Fail);
    }
    sum += f;
    sum2 += f * f;
  }
  const double mean = sum / static_cast<double>(o.shots);
  const double var = std::max(0.0, sum2 / static_cast<double>(o.shots) - mean * mean);
  return {mean, std::sqrt(var / static_cast<double>(o.shots))};
}

double binom(int n, int k) {
  return std::round(std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)));
}

}  // namespace

QubitState branched_state(BranchedCode code) { return named_state(code_name(code)); }

double majority_fidelity(int survivors, int dephased, double p, TieRule ties) {
  if (survivors <= 0 || dephased < 0 || dephased > survivors) throw Error("majority_fidelity: bad counts");
  double f = 0.0;
  for (int x = 0; x <= dephased; ++x) {
    const double w = binom(dephased, x) * std::pow(p, x) * std::pow(1.0 - p, dephased - x);
    if (2 * x < survivors) f += w;
    if (2 * x == survivors && ties == TieRule::Half) f += 0.5 * w;
  }
  return f;
}

TeleportResult teleport_branched(BranchedCode code, const TeleportOptions& options) {
  if (!(options.p >= 0.0 && options.p <= 1.0)) throw Error("teleport: p must lie in [0, 1]");
  const Vec psi = resolve_input(options.input);
  switch (options.method) {
    case TeleportMethod::Analytic: {
      // A wrong decode leaves X psi; its overlap with psi is |<psi|X|psi>|^2.
      const BranchedLayout l = branched_layout(code);
      int survivors = static_cast<int>(l.middle.size());
      for (int ph : options.lost) {
        if (ph < 0 || ph >= static_cast<int>(l.photons.size())) throw Error("teleport: no such photon");
        for (int q : l.photons[ph]) {
          if (q == l.input || q == l.output) {
            throw Error("teleport: losing an outer-vertex photon is not supported");
          }
          --survivors;
        }
      }
      if (survivors <= 0) throw Error("teleport: no middle qubit survives");
      const int k = dephased_count(options.mode, survivors);
      const double fx = std::norm(psi.dot(gates::X() * psi));
      double good = 0.0, tie = 0.0, bad = 0.0;
      for (int x = 0; x <= k; ++x) {
        const double w = binom(k, x) * std::pow(options.p, x) * std::pow(1.0 - options.p, k - x);
        (2 * x < survivors ? good : 2 * x == survivors ? tie : bad) += w;
      }
      double f = good + bad * fx;
      if (options.ties == TieRule::Half) f += 0.5 * tie * (1.0 + fx);
      return {f, 0.0};
    }
    case TeleportMethod::DensityMatrix:
      return teleport_exact(code, options, psi, false);
    case TeleportMethod::Detuned:
      return teleport_exact(code, options, psi, true);
    case TeleportMethod::Sampled:
      return teleport_sampled(code, options, psi);
  }
  return {};
}

TeleportResult loss_teleport(int lost_photon, double p, const Vec& input, TeleportMethod method, TieRule ties) {
  TeleportOptions o;
  o.mode = ErrorMode::AllQubits;
  o.p = p;
  o.input = input;
  o.method = method;
  o.ties = ties;
  o.lost = {lost_photon};
  return teleport_branched(BranchedCode::B7, o);
}

}  // namespace qg
