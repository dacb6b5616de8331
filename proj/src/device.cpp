// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0

#include "qgraph/device.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <unsupported/Eigen/LevenbergMarquardt>

#include "kernels.hpp"
#include "qgraph/parallel.hpp"

namespace qg {

namespace {

constexpr double kTwoPi = 2 * kPi;

int log2_exact(std::size_t d) {
  int k = 0;
  while ((std::size_t{1} << k) < d) ++k;
  if (d < 2 || (std::size_t{1} << k) != d) throw Error("qudit dimension must be a power of two >= 2");
  return k;
}

nlohmann::json complex_to_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }
cplx complex_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw Error("complex numbers are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

nlohmann::json matrix_to_json(const Mat& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

Mat matrix_from_json(const nlohmann::json& j) {
  const auto n = static_cast<Eigen::Index>(j.size());
  Mat m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    if (static_cast<Eigen::Index>(j[r].size()) != n) throw Error("unitaries must be square");
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

// Pairwise summation keeps the mean independent of how the trials were split.
double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) return std::accumulate(x, x + n, 0.0);
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

}  // namespace

// ---------------------------------------------------------- phase shifters

double PhaseShifterCal::span() const { return omega * (power(kMaxVoltage) - power(0.0)); }

bool PhaseShifterCal::monotone() const {
  // d(omega P)/dV = omega (rho0 + 2 rho1 V + 3 rho2 V^2): a quadratic, so its
  // minimum on the interval sits at an end point or the vertex.
  auto slope = [&](double v) { return omega * (rho0 + 2 * rho1 * v + 3 * rho2 * v * v); };
  double lo = std::min(slope(0.0), slope(kMaxVoltage));
  if (rho2 != 0) {
    const double vertex = -rho1 / (3 * rho2);
    if (vertex > 0 && vertex < kMaxVoltage) lo = std::min(lo, slope(vertex));
  }
  // A quadratic slope that only touches zero still gives a strictly rising phase.
  return lo >= 0 && span() > 0;
}

nlohmann::json PhaseShifterCal::to_json() const {
  return {{"rho0", rho0}, {"rho1", rho1}, {"rho2", rho2}, {"omega", omega}, {"phi0", phi0}};
}

PhaseShifterCal PhaseShifterCal::from_json(const nlohmann::json& j) {
  PhaseShifterCal c;
  c.rho0 = j.value("rho0", c.rho0);
  c.rho1 = j.value("rho1", c.rho1);
  c.rho2 = j.value("rho2", c.rho2);
  c.omega = j.value("omega", c.omega);
  c.phi0 = j.value("phi0", c.phi0);
  return c;
}

double phase_from_voltage(const PhaseShifterCal& cal, double v) {
  if (!(v >= 0 && v <= kMaxVoltage)) throw Error("voltage outside [0, 6] V");
  return -cal.phi0 + cal.omega * cal.power(v);
}

double voltage_from_phase(const PhaseShifterCal& cal, double phi) {
  if (!cal.monotone()) throw Error("calibration is not monotone on [0, 6] V");
  const double lo = phase_from_voltage(cal, 0.0);
  const double hi = phase_from_voltage(cal, kMaxVoltage);
  double target = phi;
  if (target < lo || target > hi) {
    target = lo + std::fmod(std::fmod(phi - lo, kTwoPi) + kTwoPi, kTwoPi);
    if (target > hi) throw Error("phase unreachable within [0, 6] V");
  }
  if (target == lo) return 0.0;
  if (target == hi) return kMaxVoltage;
  auto f = [&](double v) { return phase_from_voltage(cal, v) - target; };
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, 0.0, kMaxVoltage, f(0.0), f(kMaxVoltage),
                                                   boost::math::tools::eps_tolerance<double>(52), iters);
  // Newton polish to the last bit.
  double v = 0.5 * (r.first + r.second);
  for (int k = 0; k < 3; ++k) {
    const double slope = cal.omega * (cal.rho0 + 2 * cal.rho1 * v + 3 * cal.rho2 * v * v);
    if (slope <= 0) break;
    v = std::clamp(v - f(v) / slope, 0.0, kMaxVoltage);
  }
  return v;
}

std::vector<PhaseShifterCal> jittered_calibrations(std::size_t count, std::uint64_t seed, double jitter) {
  std::vector<PhaseShifterCal> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::mt19937_64 rng(derive_seed(seed, i));
    std::uniform_real_distribution<double> scale(1 - jitter, 1 + jitter);
    std::uniform_real_distribution<double> offset(0.0, kTwoPi);
    PhaseShifterCal c;
    c.rho1 *= scale(rng);
    c.rho2 *= scale(rng);
    c.omega *= scale(rng);
    c.phi0 = offset(rng);
    out.push_back(c);
  }
  return out;
}

namespace {

// Residuals of P_opt = c0 + c1 cos(omega x) + c2 sin(omega x) at fixed omega.
struct SeparableFit {
  Eigen::Vector3d coef;
  double sse = 0.0;
};

SeparableFit separable(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double omega) {
  Eigen::MatrixXd a(x.size(), 3);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = std::cos(omega * x(i));
    a(i, 2) = std::sin(omega * x(i));
  }
  SeparableFit f;
  f.coef = a.colPivHouseholderQr().solve(y);
  f.sse = (a * f.coef - y).squaredNorm();
  return f;
}

// Parameters (omega, c0, c1, c2) of the same model, all free.
struct FringeFunctor : Eigen::DenseFunctor<double> {
  const Eigen::VectorXd& x;
  const Eigen::VectorXd& y;
  FringeFunctor(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys)
      : Eigen::DenseFunctor<double>(4, static_cast<int>(xs.size())), x(xs), y(ys) {}

  int operator()(const InputType& p, ValueType& r) const {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      r(i) = p(1) + p(2) * std::cos(p(0) * x(i)) + p(3) * std::sin(p(0) * x(i)) - y(i);
    }
    return 0;
  }
  int df(const InputType& p, JacobianType& jac) const {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double c = std::cos(p(0) * x(i));
      const double s = std::sin(p(0) * x(i));
      jac(i, 0) = x(i) * (-p(2) * s + p(3) * c);
      jac(i, 1) = 1.0;
      jac(i, 2) = c;
      jac(i, 3) = s;
    }
    return 0;
  }
};

}  // namespace

CalibrationFit fit_calibration(const std::vector<std::pair<double, double>>& fringe,
                               const std::vector<std::pair<double, double>>& iv) {
  if (fringe.size() < 8) throw Error("fringe fit needs at least 8 points");
  if (iv.size() < 3) throw Error("IV fit needs at least 3 points");

  Eigen::MatrixXd a(static_cast<Eigen::Index>(iv.size()), 3);
  Eigen::VectorXd cur(static_cast<Eigen::Index>(iv.size()));
  for (std::size_t i = 0; i < iv.size(); ++i) {
    const double v = iv[i].first;
    a.row(static_cast<Eigen::Index>(i)) << 1.0, v, v * v;
    cur(static_cast<Eigen::Index>(i)) = iv[i].second;
  }
  const Eigen::Vector3d rho = a.colPivHouseholderQr().solve(cur);
  CalibrationFit out;
  out.cal.rho0 = rho(0);
  out.cal.rho1 = rho(1);
  out.cal.rho2 = rho(2);
  out.iv_rms = std::sqrt((a * rho - cur).squaredNorm() / static_cast<double>(iv.size()));

  const auto n = static_cast<Eigen::Index>(fringe.size());
  Eigen::VectorXd x(n), y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i) = out.cal.power(fringe[static_cast<std::size_t>(i)].first);
    y(i) = fringe[static_cast<std::size_t>(i)].second;
  }
  const double span = x.maxCoeff() - x.minCoeff();
  if (!(span > 0)) throw Error("fringe samples do not span any heater power");

  // Frequencies from a third of a period over the span up to Nyquist for the
  // average sample spacing.
  const double w_lo = kTwoPi / (3 * span);
  const double w_hi = kPi * static_cast<double>(n - 1) / span;
  const int grid = 4000;
  double best_w = w_lo;
  double best_sse = std::numeric_limits<double>::infinity();
  const double step = (w_hi - w_lo) / grid;
  for (int k = 0; k <= grid; ++k) {
    const double w = w_lo + step * k;
    const double sse = separable(x, y, w).sse;
    if (sse < best_sse) {
      best_sse = sse;
      best_w = w;
    }
  }
  const auto brent = boost::math::tools::brent_find_minima(
      [&](double w) { return separable(x, y, w).sse; }, std::max(w_lo, best_w - step),
      std::min(w_hi, best_w + step), std::numeric_limits<double>::digits / 2);
  const SeparableFit start = separable(x, y, brent.first);

  FringeFunctor functor(x, y);
  Eigen::LevenbergMarquardt<FringeFunctor> lm(functor);
  lm.setXtol(1e-15);
  lm.setFtol(1e-15);
  lm.setGtol(0.0);
  lm.setMaxfev(2000);
  Eigen::VectorXd p(4);
  p << brent.first, start.coef(0), start.coef(1), start.coef(2);
  const auto status = lm.minimize(p);
  if (status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters ||
      status == Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation || !p.allFinite()) {
    throw Error("fringe fit did not converge");
  }
  Eigen::VectorXd r(n);
  functor(p, r);
  out.fringe_rms = std::sqrt(r.squaredNorm() / static_cast<double>(n));

  const double omega = p(0);
  if (omega * span < kTwoPi) throw Error("fringe samples span less than one period");
  // -A cos(omega x - phi0) = c1 cos(omega x) + c2 sin(omega x).
  out.amplitude = std::hypot(p(2), p(3));
  out.background = p(1) - out.amplitude;
  out.visibility = out.amplitude / (out.amplitude + out.background);
  out.cal.omega = omega;
  out.cal.phi0 = std::atan2(-p(3), -p(2));
  return out;
}

// --------------------------------------------------------------- qudit map

std::pair<int, int> qudit_to_qubits(int v) {
  if (v < 0 || v > 3) throw Error("ququart value outside 0..3");
  return {v >> 1, v & 1};
}

int qubits_to_qudit(int high, int low) {
  if ((high != 0 && high != 1) || (low != 0 && low != 1)) throw Error("qubit values must be 0 or 1");
  return 2 * high + low;
}

QubitState build_qudit_bell(const std::vector<cplx>& pumps) {
  const int bits = log2_exact(pumps.size());
  const auto d = static_cast<std::uint64_t>(pumps.size());
  Vec amps = Vec::Zero(static_cast<Eigen::Index>(d * d));
  for (std::uint64_t i = 0; i < d; ++i) amps(static_cast<Eigen::Index>(i * d + i)) = pumps[i];
  if (amps.norm() < 1e-12) throw Error("no source is pumped");
  return QubitState(2 * bits, amps);
}

// ----------------------------------------------------------------- fusion

Mat switch_matrix(double theta) {
  Mat m(2, 2);
  const double s = std::sin(theta / 2), c = std::cos(theta / 2);
  const cplx e = std::polar(1.0, theta);
  m << s, c, e * c, -e * s;
  return m;
}

FusionGate FusionGate::identity(int d) { return FusionGate{std::vector<double>(static_cast<std::size_t>(d), kPi)}; }

FusionGate FusionGate::swapping(int d, const std::vector<int>& modes) {
  FusionGate g = identity(d);
  for (int m : modes) {
    if (m < 0 || m >= d) throw Error("fusion mode out of range");
    g.phases[static_cast<std::size_t>(m)] = 0.0;
  }
  return g;
}

Mat FusionGate::network() const {
  const auto d = static_cast<Eigen::Index>(phases.size());
  Mat w = Mat::Zero(2 * d, 2 * d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const Mat s = switch_matrix(phases[static_cast<std::size_t>(k)]);
    w(k, k) = s(0, 0);
    w(k, d + k) = s(0, 1);
    w(d + k, k) = s(1, 0);
    w(d + k, d + k) = s(1, 1);
  }
  return w;
}

void ChipConfig::validate() const {
  log2_exact(static_cast<std::size_t>(dim));
  if (pumps.size() != static_cast<std::size_t>(2 * dim)) throw Error("need one pump amplitude per source");
  for (int module = 0; module < 2; ++module) {
    double norm = 0.0;
    for (int i = 0; i < dim; ++i) norm += std::norm(pumps[static_cast<std::size_t>(module * dim + i)]);
    if (std::abs(norm - 1.0) > 1e-10) throw Error("pump amplitudes must be normalized per module");
  }
  if (bc.phases.size() != static_cast<std::size_t>(dim) || ad.phases.size() != static_cast<std::size_t>(dim)) {
    throw Error("fusion gates need one phase per mode");
  }
  if (!unitaries.empty()) {
    if (unitaries.size() != 4) throw Error("need four detection unitaries");
    for (const auto& u : unitaries) {
      if (u.rows() != dim) throw Error("detection unitary has the wrong dimension");
      check_unitary(u);
    }
  }
  const std::size_t heaters = 4 * static_cast<std::size_t>(dim * (dim - 1));
  if (!calibrations.empty() && calibrations.size() != heaters) throw Error("need one calibration per heater");
}

ChipConfig ChipConfig::ghz(int d) {
  ChipConfig c;
  c.dim = d;
  c.pumps.assign(static_cast<std::size_t>(2 * d), cplx{0.0, 0.0});
  const double a = 1 / std::sqrt(2.0);
  for (int module = 0; module < 2; ++module) {
    c.pumps[static_cast<std::size_t>(module * d)] = a;
    c.pumps[static_cast<std::size_t>(module * d + d - 1)] = a;
  }
  c.bc = FusionGate::swapping(d, {0});
  c.ad = FusionGate::identity(d);
  return c;
}

ChipConfig ChipConfig::four_p_four_d() {
  ChipConfig c;
  c.dim = 4;
  const cplx one{1.0, 0.0};
  const cplx i = kI;
  const cplx r = std::polar(1.0, kPi / 4);
  c.pumps = {0.5 * one, 0.5 * one, 0.5 * std::conj(r), 0.5 * i,   // S1..S4
             0.5 * one, 0.5 * i,   0.5 * one,          0.5 * std::conj(r)};  // S5..S8
  c.bc = FusionGate::swapping(4, {1, 2});
  c.ad = FusionGate::identity(4);
  return c;
}

std::vector<PhaseShifterCal> ChipConfig::heater_calibrations() const {
  if (!calibrations.empty()) return calibrations;
  return jittered_calibrations(4 * static_cast<std::size_t>(dim * (dim - 1)), calibration_seed);
}

nlohmann::json ChipConfig::to_json() const {
  nlohmann::json j;
  j["dim"] = dim;
  j["pumps"] = nlohmann::json::array();
  for (const auto& p : pumps) j["pumps"].push_back(complex_to_json(p));
  j["bc_gate"] = bc.phases;
  j["ad_gate"] = ad.phases;
  j["unitaries"] = nlohmann::json::array();
  for (const auto& u : unitaries) j["unitaries"].push_back(matrix_to_json(u));
  j["calibration_seed"] = calibration_seed;
  j["calibrations"] = nlohmann::json::array();
  for (const auto& c : calibrations) j["calibrations"].push_back(c.to_json());
  return j;
}

ChipConfig ChipConfig::from_json(const nlohmann::json& j) {
  ChipConfig c;
  c.dim = j.value("dim", 4);
  for (const auto& p : j.at("pumps")) c.pumps.push_back(complex_from_json(p));
  c.bc.phases = j.at("bc_gate").get<std::vector<double>>();
  c.ad.phases = j.at("ad_gate").get<std::vector<double>>();
  if (j.contains("unitaries")) {
    for (const auto& u : j["unitaries"]) c.unitaries.push_back(matrix_from_json(u));
  }
  c.calibration_seed = j.value("calibration_seed", c.calibration_seed);
  if (j.contains("calibrations")) {
    for (const auto& cal : j["calibrations"]) c.calibrations.push_back(PhaseShifterCal::from_json(cal));
  }
  c.validate();
  return c;
}

void NoiseConfig::validate() const {
  if (!(sigma_v >= 0)) throw Error("sigma_v must be non-negative");
  if (!(epsilon >= 0 && epsilon <= 1)) throw Error("epsilon must lie in [0, 1]");
  if (trials < 1) throw Error("trials must be at least 1");
}

nlohmann::json NoiseConfig::to_json() const {
  return {{"sigma_v", sigma_v}, {"epsilon", epsilon}, {"trials", trials}, {"seed", seed}};
}

NoiseConfig NoiseConfig::from_json(const nlohmann::json& j) {
  NoiseConfig n;
  n.sigma_v = j.value("sigma_v", n.sigma_v);
  n.epsilon = j.value("epsilon", n.epsilon);
  n.trials = j.value("trials", n.trials);
  n.seed = j.value("seed", n.seed);
  n.validate();
  return n;
}

QubitState source_state(const ChipConfig& config) {
  config.validate();
  const auto d = static_cast<std::ptrdiff_t>(config.dim);
  std::vector<cplx> ab(config.pumps.begin(), config.pumps.begin() + d);
  std::vector<cplx> cd(config.pumps.begin() + d, config.pumps.end());
  return build_qudit_bell(ab).tensor(build_qudit_bell(cd));
}

double Branches::mass() const {
  double m = 0.0;
  for (const auto& v : parts) m += v.squaredNorm();
  return m;
}

DensityOperator Branches::density() const {
  const auto d = Eigen::Index{1} << num_qubits;
  Mat rho = Mat::Zero(d, d);
  for (const auto& v : parts) rho += v * v.adjoint();
  return DensityOperator(num_qubits, rho, false);
}

Branches apply_fusion(const Branches& in, const FusionGate& gate, int first, int second, bool coherent) {
  if (in.num_qubits % 4 != 0) throw Error("fusion acts on a four-qudit register");
  const int bits = in.num_qubits / 4;
  const int d = 1 << bits;
  if (gate.phases.size() != static_cast<std::size_t>(d)) throw Error("fusion gate dimension mismatch");
  if (first == second || first < 0 || second < 0 || first > 3 || second > 3) throw Error("bad fusion qudits");
  const Mat w = gate.network();
  const int shift_a = bits * (3 - first);
  const int shift_b = bits * (3 - second);
  const std::uint64_t mask = static_cast<std::uint64_t>(d - 1);

  Branches out;
  out.num_qubits = in.num_qubits;
  for (const auto& v : in.parts) {
    Vec direct = Vec::Zero(v.size());
    Vec exchanged = Vec::Zero(v.size());
    for (Eigen::Index idx = 0; idx < v.size(); ++idx) {
      const cplx amp = v(idx);
      if (amp == cplx{0.0, 0.0}) continue;
      const auto u = static_cast<std::uint64_t>(idx);
      const auto x = static_cast<Eigen::Index>((u >> shift_a) & mask);
      const auto y = static_cast<Eigen::Index>((u >> shift_b) & mask);
      const std::uint64_t rest = u & ~((mask << shift_a) | (mask << shift_b));
      for (Eigen::Index xo = 0; xo < d; ++xo) {
        for (Eigen::Index yo = 0; yo < d; ++yo) {
          const cplx dir = w(xo, x) * w(d + yo, d + y);
          const cplx exc = w(xo, d + y) * w(d + yo, x);
          if (dir == cplx{0.0, 0.0} && exc == cplx{0.0, 0.0}) continue;
          const auto target = static_cast<Eigen::Index>(rest | (static_cast<std::uint64_t>(xo) << shift_a) |
                                                        (static_cast<std::uint64_t>(yo) << shift_b));
          direct(target) += amp * dir;
          exchanged(target) += amp * exc;
        }
      }
    }
    if (coherent) {
      out.parts.push_back(direct + exchanged);
    } else {
      out.parts.push_back(direct);
      out.parts.push_back(exchanged);
    }
  }
  // Drop empty branches so a single surviving path reads as pure.
  out.parts.erase(std::remove_if(out.parts.begin(), out.parts.end(),
                                 [](const Vec& p) { return p.squaredNorm() < 1e-30; }),
                  out.parts.end());
  return out;
}

FusionResult fusion_postselect(const QubitState& joint, const FusionGate& bc, const FusionGate& ad,
                               std::array<double, 2> epsilon) {
  for (double e : epsilon) {
    if (!(e >= 0 && e <= 1)) throw Error("epsilon must lie in [0, 1]");
  }
  Branches start;
  start.num_qubits = joint.num_qubits();
  start.parts.push_back(joint.amplitudes());

  FusionResult r;
  r.branches.num_qubits = joint.num_qubits();
  for (int mix = 0; mix < 4; ++mix) {
    const bool bc_coherent = (mix & 1) == 0;
    const bool ad_coherent = (mix & 2) == 0;
    const double weight = (bc_coherent ? 1 - epsilon[0] : epsilon[0]) * (ad_coherent ? 1 - epsilon[1] : epsilon[1]);
    if (weight == 0) continue;
    Branches b = apply_fusion(start, bc, 1, 2, bc_coherent);
    b = apply_fusion(b, ad, 0, 3, ad_coherent);
    for (auto& p : b.parts) r.branches.parts.push_back(std::sqrt(weight) * p);
  }
  r.probability = r.branches.mass();
  if (r.probability < 1e-12) throw ZeroMassError("post-selected mass below 1e-12");
  r.state = r.branches.density();
  if (r.branches.parts.size() == 1) r.pure = QubitState(joint.num_qubits(), r.branches.parts[0]);
  return r;
}

FusionResult fusion_postselect(const ChipConfig& config, std::array<double, 2> epsilon) {
  return fusion_postselect(source_state(config), config.bc, config.ad, epsilon);
}

PostselectResult fusion_via_fock(const QubitState& joint, const FusionGate& bc, const FusionGate& ad,
                                 double distinguishability) {
  if (joint.num_qubits() % 4 != 0) throw Error("fusion acts on a four-qudit register");
  const int bits = joint.num_qubits() / 4;
  const int d = 1 << bits;
  const Mat wbc = bc.network();
  const Mat wad = ad.network();
  Mat net = Mat::Zero(4 * d, 4 * d);
  for (int i = 0; i < 2 * d; ++i) {
    for (int j = 0; j < 2 * d; ++j) {
      net(d + i, d + j) = wbc(i, j);  // B, C occupy modes d .. 3d-1
      const int ri = i < d ? i : 2 * d + i;
      const int rj = j < d ? j : 2 * d + j;
      net(ri, rj) = wad(i, j);
    }
  }
  std::vector<FockTerm> input;
  const auto mask = static_cast<std::uint64_t>(d - 1);
  for (std::uint64_t idx = 0; idx < joint.dim(); ++idx) {
    const cplx amp = joint[idx];
    if (std::abs(amp) < 1e-15) continue;
    FockTerm t;
    t.amplitude = amp;
    for (int q = 0; q < 4; ++q) {
      const int v = static_cast<int>((idx >> (bits * (3 - q))) & mask);
      t.photons.push_back({q * d + v, q < 2 ? 0 : 1});
    }
    input.push_back(t);
  }
  std::vector<std::vector<int>> groups(4);
  for (int q = 0; q < 4; ++q) {
    for (int v = 0; v < d; ++v) groups[static_cast<std::size_t>(q)].push_back(q * d + v);
  }
  return run_postselected(net, input, groups, distinguishability);
}

// ------------------------------------------------------------------ meshes

Mat mzi_matrix(double theta, double phi) {
  // i e^{i theta/2} [[e^{i phi} sin(theta/2), cos(theta/2)],
  //                  [e^{i phi} cos(theta/2), -sin(theta/2)]]
  const cplx g = kI * std::polar(1.0, theta / 2);
  const cplx e = std::polar(1.0, phi);
  const double s = std::sin(theta / 2), c = std::cos(theta / 2);
  Mat t(2, 2);
  t << g * e * s, g * c, g * e * c, -g * s;
  return t;
}

nlohmann::json MeshPhases::to_json() const {
  auto m = nlohmann::json::array();
  for (const auto& z : mzis) m.push_back({{"mode", z.mode}, {"theta", z.theta}, {"phi", z.phi}});
  return {{"dim", dim}, {"mzis", m}, {"output_phases", output_phases}};
}

namespace {

// Right-multiplies u by the adjoint of the MZI on (c, c + 1).
void apply_mzi_adjoint_right(Mat& u, int c, double theta, double phi) {
  const Mat t = mzi_matrix(theta, phi).adjoint();
  const Mat cols = u.middleCols(c, 2) * t;
  u.middleCols(c, 2) = cols;
}

}  // namespace

MeshPhases compile_measurement_mesh(const Mat& target) {
  if (target.rows() != target.cols() || target.rows() < 2) throw Error("mesh target must be square");
  check_unitary(target);
  const int n = static_cast<int>(target.rows());
  Mat u = target;
  MeshPhases mesh;
  mesh.dim = n;
  for (int r = n - 1; r >= 1; --r) {
    for (int c = 0; c < r; ++c) {
      const cplx a = u(r, c);
      const cplx b = u(r, c + 1);
      double theta = kPi, phi = 0.0;
      if (std::abs(a) > 1e-15) {
        theta = 2 * std::atan2(std::abs(b), std::abs(a));
        phi = std::arg(a) - std::arg(b) + kPi;
        if (std::abs(b) <= 1e-15) phi = 0.0;
      }
      apply_mzi_adjoint_right(u, c, theta, phi);
      mesh.mzis.push_back({c, theta, phi});
    }
  }
  for (int k = 0; k < n; ++k) mesh.output_phases.push_back(std::arg(u(k, k)));
  return mesh;
}

namespace {

Mat mesh_product(int n, const std::vector<MziSetting>& mzis, const std::vector<double>& thetas,
                 const std::vector<double>& phis, const std::vector<double>& out) {
  Mat u = Mat::Identity(n, n);
  for (std::size_t m = 0; m < mzis.size(); ++m) {
    const Mat t = mzi_matrix(thetas[m], phis[m]);
    const int c = mzis[m].mode;
    const Mat rows = t * u.middleRows(c, 2);
    u.middleRows(c, 2) = rows;
  }
  for (int k = 0; k < n; ++k) u.row(k) *= std::polar(1.0, out[static_cast<std::size_t>(k)]);
  return u;
}

}  // namespace

Mat mesh_to_unitary(const MeshPhases& mesh) {
  std::vector<double> th, ph;
  for (const auto& z : mesh.mzis) {
    if (z.mode < 0 || z.mode + 1 >= mesh.dim) throw Error("MZI mode out of range");
    th.push_back(z.theta);
    ph.push_back(z.phi);
  }
  if (mesh.output_phases.size() != static_cast<std::size_t>(mesh.dim)) throw Error("need one output phase per mode");
  return mesh_product(mesh.dim, mesh.mzis, th, ph, mesh.output_phases);
}

MeshDrive drive_mesh(const MeshPhases& mesh, const std::vector<PhaseShifterCal>& heaters) {
  if (heaters.size() < 2 * mesh.mzis.size()) throw Error("not enough heater calibrations for the mesh");
  MeshDrive d;
  d.mesh = mesh;
  d.heaters.assign(heaters.begin(), heaters.begin() + static_cast<std::ptrdiff_t>(2 * mesh.mzis.size()));
  for (std::size_t m = 0; m < mesh.mzis.size(); ++m) {
    d.voltages.push_back(voltage_from_phase(d.heaters[2 * m], mesh.mzis[m].theta));
    d.voltages.push_back(voltage_from_phase(d.heaters[2 * m + 1], mesh.mzis[m].phi));
  }
  return d;
}

Mat noisy_mesh_unitary(const MeshDrive& drive, double sigma_v, std::mt19937_64& rng) {
  const MeshPhases& mesh = drive.mesh;
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto realize = [&](std::size_t h, double phase) {
    if (sigma_v == 0) return phase;
    const PhaseShifterCal& cal = drive.heaters[h];
    const double v = drive.voltages[h];
    const double noisy = std::clamp(v + sigma_v * gauss(rng), 0.0, kMaxVoltage);
    return phase + (phase_from_voltage(cal, noisy) - phase_from_voltage(cal, v));
  };
  std::vector<double> th, ph;
  for (std::size_t m = 0; m < mesh.mzis.size(); ++m) {
    th.push_back(realize(2 * m, mesh.mzis[m].theta));
    ph.push_back(realize(2 * m + 1, mesh.mzis[m].phi));
  }
  return mesh_product(mesh.dim, mesh.mzis, th, ph, mesh.output_phases);
}

Mat noisy_mesh_unitary(const MeshPhases& mesh, const std::vector<PhaseShifterCal>& heaters, double sigma_v,
                       std::mt19937_64& rng) {
  return noisy_mesh_unitary(drive_mesh(mesh, heaters), sigma_v, rng);
}

std::vector<double> detection_probabilities(const Branches& fused, const std::vector<Mat>& unitaries) {
  if (unitaries.size() != 4) throw Error("need four detection unitaries");
  const int bits = fused.num_qubits / 4;
  std::vector<double> p(std::size_t{1} << fused.num_qubits, 0.0);
  for (const auto& part : fused.parts) {
    Vec v = part;
    for (int q = 0; q < 4; ++q) {
      std::vector<int> pos;
      for (int b = 0; b < bits; ++b) pos.push_back(q * bits + b);
      detail::apply_gate(v.data(), fused.num_qubits, unitaries[static_cast<std::size_t>(q)], pos);
    }
    for (Eigen::Index i = 0; i < v.size(); ++i) p[static_cast<std::size_t>(i)] += std::norm(v(i));
  }
  return p;
}

// ------------------------------------------------------------- trial runner

nlohmann::json TrialStats::to_json() const {
  nlohmann::json j = {{"trials", trials},   {"failures", failures},         {"mean", mean},
                      {"std_dev", std_dev}, {"ci_half_width", ci_half_width}};
  if (!values.empty()) {
    auto v = nlohmann::json::array();
    for (double x : values) v.push_back(std::isnan(x) ? nlohmann::json(nullptr) : nlohmann::json(x));
    j["values"] = v;
  }
  return j;
}

TrialStats run_noisy_trials(const ChipConfig& config, const TrialExperiment& experiment, const NoiseConfig& noise,
                            bool keep_values, int threads) {
  noise.validate();
  config.validate();
  const auto n = static_cast<std::size_t>(noise.trials);
  std::vector<double> values(n, std::numeric_limits<double>::quiet_NaN());
  parallel_for(
      n,
      [&](std::size_t t) {
        std::mt19937_64 rng(derive_seed(noise.seed, t));
        try {
          values[t] = experiment(config, noise, rng);
        } catch (const ZeroMassError&) {
          values[t] = std::numeric_limits<double>::quiet_NaN();
        }
      },
      threads);

  TrialStats s;
  s.trials = noise.trials;
  std::vector<double> ok;
  for (double v : values) {
    if (std::isnan(v)) {
      ++s.failures;
    } else {
      ok.push_back(v);
    }
  }
  if (!ok.empty()) {
    const double m = pairwise_sum(ok.data(), ok.size()) / static_cast<double>(ok.size());
    std::vector<double> dev2(ok.size());
    std::transform(ok.begin(), ok.end(), dev2.begin(), [m](double v) { return (v - m) * (v - m); });
    const double var = ok.size() > 1 ? pairwise_sum(dev2.data(), dev2.size()) / static_cast<double>(ok.size() - 1) : 0.0;
    s.mean = m;
    s.std_dev = std::sqrt(var);
    s.ci_half_width = 1.96 * s.std_dev / std::sqrt(static_cast<double>(ok.size()));
  } else {
    s.mean = std::numeric_limits<double>::quiet_NaN();
  }
  if (keep_values) s.values = values;
  return s;
}

}  // namespace qg
