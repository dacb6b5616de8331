// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0

#include "qgraph/verification.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>

#include "qgraph/parallel.hpp"

namespace qg {

namespace {

Mat basis_matrix(const std::vector<Vec>& b) {
  Mat u(b.front().size(), static_cast<Eigen::Index>(b.size()));
  for (std::size_t i = 0; i < b.size(); ++i) u.col(static_cast<Eigen::Index>(i)) = b[i];
  return u;
}

// Restriction of p's letters to the group's qubits, sign dropped.
Mat group_matrix(const PauliString& p, const std::vector<int>& qubits) {
  std::vector<std::uint8_t> letters;
  for (int q : qubits) letters.push_back(p.letters()[static_cast<std::size_t>(q)]);
  return PauliString(letters).matrix();
}

// Diagonal of P_g in the group basis, or empty when P_g is not diagonal
// there with +-1 entries.
std::vector<double> group_diagonal(const LocalBasis& g, const PauliString& p) {
  const Mat u = basis_matrix(g.vectors());
  const Mat d = u.adjoint() * group_matrix(p, g.qubits) * u;
  std::vector<double> out;
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      if (i != j && std::abs(d(i, j)) > 1e-9) return {};
    }
    const cplx v = d(i, i);
    if (std::abs(v.imag()) > 1e-9 || std::abs(std::abs(v.real()) - 1.0) > 1e-9) return {};
    out.push_back(v.real() > 0 ? 1.0 : -1.0);
  }
  return out;
}

double pauli_sign(const PauliString& p) {
  if (!p.is_hermitian()) throw Error("measured Pauli strings must be Hermitian");
  return p.phase() == 0 ? 1.0 : -1.0;
}

}  // namespace

// ------------------------------------------------------------------ settings

std::vector<Vec> LocalBasis::vectors() const {
  switch (kind) {
    case Kind::Pauli:
      return pauli_basis(axis);
    case Kind::Equatorial:
      return equatorial_basis(theta);
    case Kind::Bell:
      return bell_basis();
  }
  throw Error("unknown basis kind");
}

MeasurementSetting::MeasurementSetting(int n, std::vector<LocalBasis> groups) : n_(n), groups_(std::move(groups)) {
  std::sort(groups_.begin(), groups_.end(),
            [](const LocalBasis& a, const LocalBasis& b) { return a.qubits.front() < b.qubits.front(); });
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (const auto& g : groups_) {
    const std::size_t want = g.kind == LocalBasis::Kind::Bell ? 2 : 1;
    if (g.qubits.size() != want) throw Error("basis group has the wrong number of qubits");
    if (g.kind == LocalBasis::Kind::Bell && (g.qubits[0] % 2 != 0 || g.qubits[1] != g.qubits[0] + 1)) {
      throw Error("entangled settings are only allowed within one qudit");
    }
    if (g.kind == LocalBasis::Kind::Pauli && g.axis != 'X' && g.axis != 'Y' && g.axis != 'Z') {
      throw Error("Pauli axis must be X, Y or Z");
    }
    for (int q : g.qubits) {
      if (q < 0 || q >= n) throw Error("setting qubit out of range");
      if (seen[static_cast<std::size_t>(q)]++) throw Error("qubit measured twice in one setting");
    }
  }
  if (std::count(seen.begin(), seen.end(), 0) > 0) throw Error("setting leaves a qubit unmeasured");
}

MeasurementSetting MeasurementSetting::from_pauli(const std::string& letters) {
  std::vector<LocalBasis> groups;
  const int n = static_cast<int>(letters.size());
  for (int q = 0; q < n; ++q) {
    LocalBasis b;
    b.qubits = {q};
    b.axis = letters[static_cast<std::size_t>(q)];
    groups.push_back(b);
  }
  return MeasurementSetting(n, groups);
}

MeasurementSetting MeasurementSetting::equatorial(int n, double theta) {
  std::vector<LocalBasis> groups;
  for (int q = 0; q < n; ++q) {
    LocalBasis b;
    b.kind = LocalBasis::Kind::Equatorial;
    b.qubits = {q};
    b.theta = theta;
    groups.push_back(b);
  }
  return MeasurementSetting(n, groups);
}

MeasurementSetting MeasurementSetting::with_bell_pair(int qudit) const {
  std::vector<LocalBasis> groups;
  for (const auto& g : groups_) {
    const bool inside = std::any_of(g.qubits.begin(), g.qubits.end(), [&](int q) { return q / 2 == qudit; });
    if (!inside) groups.push_back(g);
  }
  LocalBasis b;
  b.kind = LocalBasis::Kind::Bell;
  b.qubits = {2 * qudit, 2 * qudit + 1};
  groups.push_back(b);
  return MeasurementSetting(n_, groups);
}

bool MeasurementSetting::derives(const PauliString& p) const {
  if (p.size() != n_) throw Error("Pauli length differs from the setting");
  if (!p.is_hermitian()) return false;
  return std::all_of(groups_.begin(), groups_.end(), [&](const LocalBasis& g) { return !group_diagonal(g, p).empty(); });
}

double MeasurementSetting::eigenvalue(const PauliString& p, std::uint64_t outcome) const {
  double v = pauli_sign(p);
  for (const auto& g : groups_) {
    const auto d = group_diagonal(g, p);
    if (d.empty()) throw Error("Pauli string " + p.to_string() + " is not derivable from " + to_string());
    const int k = static_cast<int>(g.qubits.size());
    const int last = g.qubits.back();
    const auto local = (outcome >> (n_ - 1 - last)) & ((std::uint64_t{1} << k) - 1);
    v *= d[local];
  }
  return v;
}

std::vector<double> MeasurementSetting::probabilities(const QubitState& psi) const {
  if (psi.num_qubits() != n_) throw Error("state size differs from the setting");
  QubitState rotated = psi;
  for (const auto& g : groups_) rotated = apply_unitary(rotated, basis_matrix(g.vectors()).adjoint(), g.qubits);
  std::vector<double> p(rotated.dim());
  for (std::uint64_t i = 0; i < rotated.dim(); ++i) p[i] = std::norm(rotated[i]);
  return p;
}

std::vector<double> MeasurementSetting::probabilities(const DensityOperator& rho) const {
  if (rho.num_qubits() != n_) throw Error("state size differs from the setting");
  DensityOperator rotated = rho;
  for (const auto& g : groups_) rotated = apply_unitary(rotated, basis_matrix(g.vectors()).adjoint(), g.qubits);
  std::vector<double> p(rotated.dim());
  for (std::uint64_t i = 0; i < rotated.dim(); ++i) {
    p[i] = std::max(0.0, rotated.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real());
  }
  return p;
}

std::string MeasurementSetting::to_string() const {
  std::string s;
  for (const auto& g : groups_) {
    switch (g.kind) {
      case LocalBasis::Kind::Pauli:
        s += g.axis;
        break;
      case LocalBasis::Kind::Equatorial: {
        char buf[40];
        std::snprintf(buf, sizeof buf, "M(%.6g)", g.theta);
        s += buf;
        break;
      }
      case LocalBasis::Kind::Bell:
        s += "[B]";
        break;
    }
  }
  return s;
}

nlohmann::json MeasurementSetting::to_json() const {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : groups_) {
    nlohmann::json one;
    nlohmann::json qs = nlohmann::json::array();
    for (int q : g.qubits) qs.push_back(q + 1);
    one["qubits"] = qs;
    switch (g.kind) {
      case LocalBasis::Kind::Pauli:
        one["kind"] = "pauli";
        one["axis"] = std::string(1, g.axis);
        break;
      case LocalBasis::Kind::Equatorial:
        one["kind"] = "equatorial";
        one["theta"] = g.theta;
        break;
      case LocalBasis::Kind::Bell:
        one["kind"] = "bell";
        break;
    }
    groups.push_back(one);
  }
  return {{"n", n_}, {"groups", groups}};
}

MeasurementSetting MeasurementSetting::from_json(const nlohmann::json& j) {
  std::vector<LocalBasis> groups;
  for (const auto& one : j.at("groups")) {
    LocalBasis b;
    for (const auto& q : one.at("qubits")) b.qubits.push_back(q.get<int>() - 1);
    const auto kind = one.at("kind").get<std::string>();
    if (kind == "pauli") {
      const auto axis = one.at("axis").get<std::string>();
      if (axis.size() != 1) throw Error("bad Pauli axis '" + axis + "'");
      b.axis = axis[0];
    } else if (kind == "equatorial") {
      b.kind = LocalBasis::Kind::Equatorial;
      b.theta = one.at("theta").get<double>();
    } else if (kind == "bell") {
      b.kind = LocalBasis::Kind::Bell;
    } else {
      throw Error("unknown basis kind '" + kind + "'");
    }
    groups.push_back(b);
  }
  return MeasurementSetting(j.at("n").get<int>(), groups);
}

// ------------------------------------------------------------- compilation

namespace {

bool letters_match(const std::vector<std::uint8_t>& setting, const std::vector<std::uint8_t>& p) {
  for (std::size_t q = 0; q < p.size(); ++q) {
    if (p[q] != PauliString::I && p[q] != setting[q]) return false;
  }
  return true;
}

}  // namespace

SettingPlan derive_from(const std::vector<MeasurementSetting>& settings, const std::vector<PauliString>& stabilizers) {
  SettingPlan plan;
  plan.settings = settings;
  plan.derivations.resize(settings.size());
  for (std::size_t s = 0; s < stabilizers.size(); ++s) {
    bool placed = false;
    for (std::size_t i = 0; i < settings.size() && !placed; ++i) {
      if (settings[i].derives(stabilizers[s])) {
        plan.derivations[i].push_back(s);
        placed = true;
      }
    }
    if (!placed) throw Error("no setting derives " + stabilizers[s].to_string());
  }
  return plan;
}

SettingPlan compile_settings(const std::vector<PauliString>& stabilizers) {
  if (stabilizers.empty()) return {};
  const int n = stabilizers.front().size();
  if (n > kMaxQubits) throw Error("too many qubits for setting compilation");
  for (const auto& p : stabilizers) {
    if (p.size() != n) throw Error("stabilizers differ in length");
  }
  std::vector<bool> covered(stabilizers.size(), false);
  std::vector<MeasurementSetting> chosen;
  std::size_t left = stabilizers.size();
  while (left > 0) {
    // Letters worth trying per position: those used by an uncovered string.
    std::vector<std::vector<std::uint8_t>> options(static_cast<std::size_t>(n));
    for (std::size_t s = 0; s < stabilizers.size(); ++s) {
      if (covered[s]) continue;
      for (int q = 0; q < n; ++q) {
        const auto l = stabilizers[s].letters()[static_cast<std::size_t>(q)];
        auto& o = options[static_cast<std::size_t>(q)];
        if (l != PauliString::I && std::find(o.begin(), o.end(), l) == o.end()) o.push_back(l);
      }
    }
    for (auto& o : options) {
      if (o.empty()) o.push_back(PauliString::Z);
      std::sort(o.begin(), o.end());
    }
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    std::vector<std::uint8_t> best;
    std::size_t best_gain = 0;
    while (true) {
      std::vector<std::uint8_t> cand(static_cast<std::size_t>(n));
      for (int q = 0; q < n; ++q) cand[static_cast<std::size_t>(q)] = options[static_cast<std::size_t>(q)][idx[static_cast<std::size_t>(q)]];
      std::size_t gain = 0;
      for (std::size_t s = 0; s < stabilizers.size(); ++s) {
        if (!covered[s] && letters_match(cand, stabilizers[s].letters())) ++gain;
      }
      if (gain > best_gain) {
        best_gain = gain;
        best = cand;
      }
      int q = n - 1;
      while (q >= 0 && ++idx[static_cast<std::size_t>(q)] == options[static_cast<std::size_t>(q)].size()) {
        idx[static_cast<std::size_t>(q)] = 0;
        --q;
      }
      if (q < 0) break;
    }
    for (std::size_t s = 0; s < stabilizers.size(); ++s) {
      if (!covered[s] && letters_match(best, stabilizers[s].letters())) {
        covered[s] = true;
        --left;
      }
    }
    chosen.push_back(MeasurementSetting::from_pauli(PauliString(best).letters_string()));
  }
  return derive_from(chosen, stabilizers);
}

// ---------------------------------------------------------- stabilizer sums

double full_group_fidelity(const std::vector<std::pair<PauliString, double>>& expectations) {
  if (expectations.empty()) throw Error("no stabilizer expectations");
  const int n = expectations.front().first.size();
  if (expectations.size() != (std::size_t{1} << n)) {
    throw Error("full-group estimate needs all 2^n stabilizer expectations");
  }
  std::set<std::vector<std::uint8_t>> seen;
  double sum = 0.0;
  for (const auto& [p, v] : expectations) {
    if (p.size() != n) throw Error("stabilizers differ in length");
    if (!seen.insert(p.letters()).second) throw Error("stabilizer listed twice: " + p.to_string());
    sum += v;
  }
  return sum / static_cast<double>(expectations.size());
}

double generator_mean(const std::vector<double>& expectations) {
  if (expectations.empty()) throw Error("no generator expectations");
  return std::accumulate(expectations.begin(), expectations.end(), 0.0) / static_cast<double>(expectations.size());
}

// ------------------------------------------------------- equatorial protocol

double theta_fidelity(double population, const std::vector<double>& coherence, int n) {
  if (static_cast<int>(coherence.size()) != n) throw Error("need exactly n coherence samples");
  if (population < -1e-12 || population > 1 + 1e-12) throw Error("population outside [0, 1]");
  double c = 0.0;
  for (int k = 0; k < n; ++k) c += (k % 2 ? -1.0 : 1.0) * coherence[static_cast<std::size_t>(k)];
  return 0.5 * (c / n + population);
}

double theta_fidelity(const ThetaData& d, int n) { return theta_fidelity(d.population, d.coherence, n); }

ThetaData theta_data(const DensityOperator& rho) {
  const int n = rho.num_qubits();
  const auto last = static_cast<Eigen::Index>(rho.dim() - 1);
  ThetaData d;
  d.population = rho.matrix()(0, 0).real() + rho.matrix()(last, last).real();
  for (int k = 0; k < n; ++k) {
    const auto p = MeasurementSetting::equatorial(n, k * kPi / n).probabilities(rho);
    double parity = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) parity += (std::popcount(i) % 2 ? -1.0 : 1.0) * p[i];
    d.coherence.push_back(parity);
  }
  return d;
}

// --------------------------------------------------- sparse qudit fidelity

SparseTarget four_p_four_d_target() {
  SparseTarget t;
  t.qudits = 4;
  const double a = 1.0 / std::sqrt(8.0);
  const std::vector<std::pair<std::vector<int>, double>> terms = {
      {{0, 0, 0, 0}, 0},       {{0, 0, 3, 3}, -kPi / 4}, {{1, 1, 1, 1}, kPi / 2}, {{1, 2, 1, 2}, 0},
      {{2, 1, 2, 1}, kPi / 4}, {{2, 2, 2, 2}, -kPi / 4}, {{3, 3, 0, 0}, kPi / 2}, {{3, 3, 3, 3}, kPi / 4}};
  for (const auto& [ket, phase] : terms) {
    t.kets.push_back(ket);
    t.coefficients.push_back(a * std::exp(kI * phase));
  }
  return t;
}

namespace {

std::size_t ket_index(const std::vector<int>& ket) {
  std::size_t i = 0;
  for (int v : ket) i = (i << 2) | static_cast<std::size_t>(v);
  return i;
}

// tr(rho O) for O a tensor product of 4x4 single-qudit operators.
cplx embedded_expectation(const Mat& rho, const std::vector<Mat>& ops) {
  struct Entry {
    std::size_t row, col;
    cplx value;
  };
  std::vector<Entry> entries{{0, 0, 1.0}};
  for (const auto& o : ops) {
    std::vector<Entry> next;
    for (const auto& e : entries) {
      for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
          if (o(r, c) == cplx(0)) continue;
          next.push_back({(e.row << 2) | static_cast<std::size_t>(r), (e.col << 2) | static_cast<std::size_t>(c),
                          e.value * o(r, c)});
        }
      }
    }
    entries = std::move(next);
  }
  // tr(rho O) = sum_{r,c} O_{rc} rho_{cr}
  cplx sum = 0.0;
  for (const auto& e : entries) sum += e.value * rho(static_cast<Eigen::Index>(e.col), static_cast<Eigen::Index>(e.row));
  return sum;
}

// Single-qubit operator embedded on modes (a -> |0>, b -> |1>) of a qudit.
Mat embed(char letter, int a, int b) {
  Mat o = Mat::Zero(4, 4);
  switch (letter) {
    case 'I':
      o(a, a) = 1;
      o(b, b) = 1;
      break;
    case 'Z':
      o(a, a) = 1;
      o(b, b) = -1;
      break;
    case 'X':
      o(a, b) = 1;
      o(b, a) = 1;
      break;
    case 'Y':
      o(a, b) = -kI;
      o(b, a) = kI;
      break;
  }
  return o;
}

OffDiagResult build_plan(const SparseTarget& t) {
  if (t.kets.size() != t.coefficients.size() || t.kets.empty()) throw Error("target kets and coefficients differ");
  double norm = 0.0;
  for (const auto& c : t.coefficients) norm += std::norm(c);
  if (std::abs(norm - 1.0) > 1e-9) throw Error("target coefficients are not normalized");
  for (const auto& k : t.kets) {
    if (static_cast<int>(k.size()) != t.qudits) throw Error("target ket has the wrong length");
    for (int v : k) {
      if (v < 0 || v > 3) throw Error("qudit mode out of range");
    }
  }
  OffDiagResult r;
  r.diagonal_projectors = 1LL << (2 * t.qudits);
  for (std::size_t k = 0; k < t.kets.size(); ++k) {
    for (std::size_t l = 0; l < k; ++l) {
      OffDiagTerm term;
      term.k = k;
      term.l = l;
      for (int j = 0; j < t.qudits; ++j) {
        const int a = t.kets[k][static_cast<std::size_t>(j)];
        const int b = t.kets[l][static_cast<std::size_t>(j)];
        if (a != b) {
          term.qudits.push_back(j);
          term.modes.emplace_back(a, b);
        }
      }
      const int m = static_cast<int>(term.qudits.size());
      if (m == 0) throw Error("target lists the same ket twice");
      const int outcomes = 1 << m;
      term.settings = 1 + outcomes;
      term.projectors = term.settings * outcomes;
      r.projectors += term.projectors;
      r.naive_projectors += 4LL * (1 + outcomes / 2) * outcomes;
      r.pairs_by_size[m] += 1;
      r.terms.push_back(term);
    }
  }
  return r;
}

// <phi|rho|phi> for |phi> = (|k> + e^{i phi}|l>)/sqrt2 from embedded GHZ
// stabilizer expectations: one Z setting plus every X/Y string.
double phase_state_fidelity(int m, double phi, const std::vector<cplx>& xy_values, double z_part) {
  double sum = z_part;
  for (int s = 0; s < (1 << m); ++s) {
    const int ny = std::popcount(static_cast<unsigned>(s));
    const cplx w = std::exp(-kI * phi) * std::pow(kI, ny);
    sum += (w * xy_values[static_cast<std::size_t>(s)]).real();
  }
  return sum / (1 << m);
}

}  // namespace

OffDiagResult offdiag_plan(const SparseTarget& target) { return build_plan(target); }

OffDiagResult direct_fidelity_offdiag(const DensityOperator& rho, const SparseTarget& target) {
  OffDiagResult r = build_plan(target);
  if (rho.num_qubits() != 2 * target.qudits) throw Error("state size does not match the qudit target");
  const Mat& m = rho.matrix();

  double f = 0.0;
  for (std::size_t k = 0; k < target.kets.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(ket_index(target.kets[k]));
    f += std::norm(target.coefficients[k]) * m(i, i).real();
  }

  for (auto& term : r.terms) {
    const auto& kk = target.kets[term.k];
    const int mq = static_cast<int>(term.qudits.size());
    // Operators on the qudits that agree: projector onto the shared mode.
    auto ops_for = [&](const std::string& letters) {
      std::vector<Mat> ops;
      std::size_t d = 0;
      for (int j = 0; j < target.qudits; ++j) {
        if (d < term.qudits.size() && term.qudits[d] == j) {
          ops.push_back(embed(letters[d], term.modes[d].first, term.modes[d].second));
          ++d;
        } else {
          Mat p = Mat::Zero(4, 4);
          p(kk[static_cast<std::size_t>(j)], kk[static_cast<std::size_t>(j)]) = 1;
          ops.push_back(p);
        }
      }
      return ops;
    };
    // Z setting: all even Z subsets.
    double z_part = 0.0;
    for (int s = 0; s < (1 << mq); ++s) {
      if (std::popcount(static_cast<unsigned>(s)) % 2) continue;
      std::string letters;
      for (int q = 0; q < mq; ++q) letters += ((s >> q) & 1) ? 'Z' : 'I';
      z_part += embedded_expectation(m, ops_for(letters)).real();
    }
    // X/Y strings; bit q of s set means Y on differing qudit q.
    std::vector<cplx> xy(static_cast<std::size_t>(1 << mq));
    for (int s = 0; s < (1 << mq); ++s) {
      std::string letters;
      for (int q = 0; q < mq; ++q) letters += ((s >> q) & 1) ? 'Y' : 'X';
      xy[static_cast<std::size_t>(s)] = embedded_expectation(m, ops_for(letters)).real();
    }
    const double fp = phase_state_fidelity(mq, 0.0, xy, z_part);
    const double fm = phase_state_fidelity(mq, kPi, xy, z_part);
    const double fpi = phase_state_fidelity(mq, kPi / 2, xy, z_part);
    const double fmi = phase_state_fidelity(mq, -kPi / 2, xy, z_part);
    term.value = 0.5 * (fp - fm) + 0.5 * kI * (fpi - fmi);
    f += 2.0 * (std::conj(target.coefficients[term.l]) * target.coefficients[term.k] * term.value).real();
  }
  r.fidelity = f;
  return r;
}

// ------------------------------------------------------------------- counts

CountsRecord simulate_counts(const std::vector<double>& probabilities, const MeasurementSetting& setting,
                             long long shots, std::uint64_t seed) {
  if (shots < 1) throw Error("shots must be at least 1");
  if (probabilities.size() != (std::size_t{1} << setting.num_qubits())) throw Error("distribution size mismatch");
  std::mt19937_64 rng(seed);
  CountsRecord r;
  r.setting = setting;
  r.shots = shots;
  r.seed = seed;
  r.counts.assign(probabilities.size(), 0);
  double mass = 0.0;
  for (double p : probabilities) mass += std::max(0.0, p);
  long long left = shots;
  for (std::size_t i = 0; i < probabilities.size() && left > 0; ++i) {
    const double p = std::max(0.0, probabilities[i]);
    if (i + 1 == probabilities.size() || mass <= 0.0) {
      r.counts[i] = left;
      break;
    }
    const double q = std::clamp(p / mass, 0.0, 1.0);
    const long long c = std::binomial_distribution<long long>(left, q)(rng);
    r.counts[i] = c;
    left -= c;
    mass -= p;
  }
  return r;
}

CountsRecord simulate_counts(const QubitState& psi, const MeasurementSetting& setting, long long shots,
                             std::uint64_t seed) {
  return simulate_counts(setting.probabilities(psi), setting, shots, seed);
}

CountsRecord simulate_counts(const DensityOperator& rho, const MeasurementSetting& setting, long long shots,
                             std::uint64_t seed) {
  return simulate_counts(setting.probabilities(rho), setting, shots, seed);
}

std::vector<CountsRecord> simulate_all(const DensityOperator& rho, const std::vector<MeasurementSetting>& settings,
                                       long long shots, std::uint64_t seed, int threads) {
  std::vector<CountsRecord> out(settings.size());
  parallel_for(
      settings.size(), [&](std::size_t i) { out[i] = simulate_counts(rho, settings[i], shots, derive_seed(seed, i)); },
      threads);
  return out;
}

double estimate_expectation(const MeasurementSetting& setting, const std::vector<long long>& counts,
                            const PauliString& p) {
  long long total = 0;
  double sum = 0.0;
  for (std::size_t o = 0; o < counts.size(); ++o) {
    if (counts[o] == 0) continue;
    total += counts[o];
    sum += setting.eigenvalue(p, o) * static_cast<double>(counts[o]);
  }
  if (total == 0) throw Error("empty histogram");
  return sum / static_cast<double>(total);
}

ErrorBar bootstrap_errorbar(const CountsRecord& record, const Statistic& statistic, int rounds, std::uint64_t seed) {
  if (rounds < 2) throw Error("bootstrap needs at least two rounds");
  std::mt19937_64 rng(seed);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(rounds));
  std::vector<long long> resampled(record.counts.size());
  for (int r = 0; r < rounds; ++r) {
    for (std::size_t i = 0; i < record.counts.size(); ++i) {
      const auto c = record.counts[i];
      resampled[i] = c > 0 ? std::poisson_distribution<long long>(static_cast<double>(c))(rng) : 0;
    }
    if (std::all_of(resampled.begin(), resampled.end(), [](long long c) { return c == 0; })) continue;
    values.push_back(statistic(resampled));
  }
  ErrorBar e;
  e.mean = statistic(record.counts);
  if (values.size() < 2) return e;
  const double mu = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mu) * (v - mu);
  e.std_error = std::sqrt(var / static_cast<double>(values.size() - 1));
  return e;
}

nlohmann::json CountsRecord::to_json() const {
  return {{"setting", setting.to_json()}, {"label", setting.to_string()}, {"shots", shots}, {"seed", seed},
          {"counts", counts}};
}

CountsRecord CountsRecord::from_json(const nlohmann::json& j) {
  CountsRecord r;
  r.setting = MeasurementSetting::from_json(j.at("setting"));
  r.shots = j.at("shots").get<long long>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.counts = j.at("counts").get<std::vector<long long>>();
  if (r.counts.size() != (std::size_t{1} << r.setting.num_qubits())) throw Error("counts length mismatch");
  if (std::accumulate(r.counts.begin(), r.counts.end(), 0LL) != r.shots) throw Error("counts do not sum to shots");
  return r;
}

}  // namespace qg
