// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0

#include "qgraph/noise_map.hpp"

#include <cmath>
#include <utility>

#include "qgraph/named.hpp"

namespace qg {

namespace {

constexpr int kQudits = 4;

// Row k of the result is the conjugate of basis vector k, so outcome k is
// the projection onto it.
Mat measurement_matrix(const std::vector<Vec>& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Mat m(n, n);
  for (Eigen::Index k = 0; k < n; ++k) m.row(k) = basis[static_cast<std::size_t>(k)].adjoint();
  return m;
}

// Orthonormal basis with `target` (normalized) first.
std::vector<Vec> complete_basis(const Vec& target) {
  const auto n = target.size();
  Mat a = Mat::Identity(n, n);
  a.col(0) = target.normalized();
  // Replace the identity column most parallel to the target so the rest stay
  // independent.
  Eigen::Index drop = 0;
  target.cwiseAbs().maxCoeff(&drop);
  if (drop != 0) a.col(drop) = Vec::Unit(n, 0);
  Eigen::HouseholderQR<Mat> qr(a);
  const Mat q = qr.householderQ();
  std::vector<Vec> out;
  out.push_back(target.normalized());
  for (Eigen::Index k = 1; k < n; ++k) out.push_back(q.col(k));
  return out;
}

// Position of chip qubit q inside its qudit: 0 for the high bit.
int slot(int q) { return q % 2; }

// Embeds a gate on chip qubits (all in one qudit) as a 4x4 matrix. For
// measurements only the input side is permuted, so rows keep the basis order.
Mat embed(const Mat& g, const std::vector<int>& qubits, bool measurement) {
  if (qubits.size() == 1) {
    return slot(qubits[0]) == 0 ? gates::kron(g, gates::I2()) : gates::kron(gates::I2(), g);
  }
  if (qubits.size() != 2 || qubits[0] / 2 != qubits[1] / 2) throw Error("gate spans two qudits");
  if (slot(qubits[0]) == 0) return g;
  return measurement ? Mat(g * gates::SWAP()) : Mat(gates::SWAP() * g * gates::SWAP());
}

int qudit_of(const std::vector<int>& qubits) {
  for (int q : qubits) {
    if (q / 2 != qubits[0] / 2) throw Error("gate spans two qudits");
  }
  return qubits[0] / 2;
}

std::array<double, 3> bloch_of(const Mat& rho) {
  return {2 * rho(0, 1).real(), -2 * rho(0, 1).imag(), (rho(0, 0) - rho(1, 1)).real()};
}

}  // namespace

std::vector<Vec> cardinal_states() {
  return {kets::zero(), kets::one(), kets::plus(), kets::minus(), kets::plus_i(), kets::minus_i()};
}

ChipLineExperiment::ChipLineExperiment(Encoding encoding, const ChipConfig& config, std::vector<std::string> gates,
                                       std::vector<Vec> inputs)
    : encoding_(encoding) {
  config.validate();
  if (config.dim != 4) throw Error("the chip line experiment needs ququarts");
  const Recipe recipe = named_recipe(encoding == Encoding::Physical ? "L3" : "crazy6");
  if (recipe.seed != "ghz8") throw Error("recipe must start from GHZ8");
  const QubitState resource = run_recipe(recipe);

  // Recipe gates per qudit; projected chip qubits are held at their outcome.
  std::array<Mat, kQudits> local;
  local.fill(Mat::Identity(4, 4));
  std::array<int, 8> required{};
  std::array<bool, 8> projected{};
  for (const auto& step : recipe.steps) {
    if (step.kind == RecipeStep::Kind::ZProject) {
      projected[static_cast<std::size_t>(step.qubits[0])] = true;
      required[static_cast<std::size_t>(step.qubits[0])] = step.outcome;
      continue;
    }
    for (int q : step.qubits) {
      if (projected[static_cast<std::size_t>(q)]) throw Error("recipe acts on a projected qubit");
    }
    const int k = qudit_of(step.qubits);
    local[static_cast<std::size_t>(k)] = embed(step.gate, step.qubits, false) * local[static_cast<std::size_t>(k)];
  }

  const std::vector<int>& order = recipe.order;
  auto chip = [&](int vertex) { return order.at(static_cast<std::size_t>(vertex)); };

  // Output qudit and the detection indices of its two readouts.
  const MeasurementPattern probe = line3_pattern(0.0, kets::zero(), encoding);
  std::vector<int> out_qubits;
  for (int v : probe.outputs) out_qubits.push_back(chip(v));
  output_qudit_ = qudit_of(out_qubits);
  auto index_with = [&](int qudit_value) {
    std::size_t idx = 0;
    for (int k = 0; k < kQudits; ++k) {
      const int value = k == output_qudit_ ? qudit_value
                                           : 2 * required[static_cast<std::size_t>(2 * k)] +
                                                 required[static_cast<std::size_t>(2 * k + 1)];
      idx = (idx << 2) | static_cast<std::size_t>(value);
    }
    return idx;
  };
  if (encoding == Encoding::Physical) {
    // The other qubit of the output qudit is projected and must read its outcome.
    const int q = out_qubits[0];
    const int other = q ^ 1;
    const int r = required[static_cast<std::size_t>(other)];
    auto value = [&](int bit) { return slot(q) == 0 ? 2 * bit + r : 2 * r + bit; };
    plus_index_ = index_with(value(0));
    minus_index_ = index_with(value(1));
  } else {
    plus_index_ = index_with(0);
    minus_index_ = index_with(1);
  }

  const auto heaters = config.heater_calibrations();
  auto qudit_heaters = [&](int k) {
    const auto first = heaters.begin() + 12 * k;
    return std::vector<PhaseShifterCal>(first, first + 12);
  };

  for (const auto& input : inputs) {
    for (const auto& name : gates) {
      const MeasurementPattern pattern = line3_pattern(rx_angle(name), input, encoding);
      Setting s;
      const PatternRun ideal = run_pattern(resource, pattern);
      s.ideal = bloch_of(pattern_output_qubit(ideal, pattern).matrix());

      std::array<Mat, kQudits> meas;
      meas.fill(Mat::Identity(4, 4));
      for (const auto& step : pattern.steps) {
        std::vector<int> qubits;
        for (int v : step.qubits) qubits.push_back(chip(v));
        Mat m;
        switch (step.kind) {
          case PatternStep::Kind::XY:
            m = measurement_matrix(xy_basis(step.theta));
            break;
          case PatternStep::Kind::Z:
            m = Mat::Identity(2, 2);
            break;
          case PatternStep::Kind::Logical:
            m = measurement_matrix(logical_basis(LogicalKind::XY, step.theta).vectors);
            break;
          case PatternStep::Kind::Project:
            m = measurement_matrix(complete_basis(step.target));
            break;
        }
        const int k = qudit_of(qubits);
        meas[static_cast<std::size_t>(k)] = embed(m, qubits, true) * meas[static_cast<std::size_t>(k)];
      }

      const char axes[3] = {'X', 'Y', 'Z'};
      const LogicalKind logical_axes[3] = {LogicalKind::X, LogicalKind::Y, LogicalKind::Z};
      for (int a = 0; a < 3; ++a) {
        const Mat readout = encoding == Encoding::Physical
                                ? measurement_matrix(pauli_basis(axes[a]))
                                : measurement_matrix(logical_basis(logical_axes[a]).vectors);
        const Mat out = embed(readout, out_qubits, true);
        for (int k = 0; k < kQudits; ++k) {
          Mat u = meas[static_cast<std::size_t>(k)] * local[static_cast<std::size_t>(k)];
          if (k == output_qudit_) u = out * u;
          s.axes[static_cast<std::size_t>(a)].drives[static_cast<std::size_t>(k)] =
              drive_mesh(compile_measurement_mesh(u), qudit_heaters(k));
        }
      }
      settings_.push_back(std::move(s));
    }
  }

  const QubitState joint = source_state(config);
  for (int bc = 0; bc < 2; ++bc) {
    for (int ad = 0; ad < 2; ++ad) {
      fused_[static_cast<std::size_t>(2 * bc + ad)] =
          fusion_postselect(joint, config.bc, config.ad, {double(bc), double(ad)}).branches;
    }
  }
}

const Branches& ChipLineExperiment::fused(bool bc_incoherent, bool ad_incoherent) const {
  return fused_[static_cast<std::size_t>(2 * int(bc_incoherent) + int(ad_incoherent))];
}

std::array<double, 3> ChipLineExperiment::ideal_bloch(std::size_t setting) const {
  return settings_.at(setting).ideal;
}

std::array<double, 3> ChipLineExperiment::chip_bloch(std::size_t setting, double sigma_v, bool bc_incoherent,
                                                     bool ad_incoherent, std::mt19937_64& rng) const {
  const Setting& s = settings_.at(setting);
  const Branches& state = fused(bc_incoherent, ad_incoherent);
  std::array<double, 3> r{};
  for (int a = 0; a < 3; ++a) {
    std::vector<Mat> u;
    for (const auto& d : s.axes[static_cast<std::size_t>(a)].drives) u.push_back(noisy_mesh_unitary(d, sigma_v, rng));
    const std::vector<double> p = detection_probabilities(state, u);
    const double plus = p[plus_index_], minus = p[minus_index_];
    if (plus + minus < 1e-14) throw ZeroMassError("no post-selected events");
    r[static_cast<std::size_t>(a)] = (plus - minus) / (plus + minus);
  }
  return r;
}

double ChipLineExperiment::mean_fidelity(double sigma_v, bool bc_incoherent, bool ad_incoherent,
                                         std::mt19937_64& rng) const {
  double total = 0.0;
  for (std::size_t i = 0; i < settings_.size(); ++i) {
    const auto r = chip_bloch(i, sigma_v, bc_incoherent, ad_incoherent, rng);
    const auto& t = settings_[i].ideal;
    // Target is pure: F = (1 + r.t) / 2.
    total += 0.5 * (1 + r[0] * t[0] + r[1] * t[1] + r[2] * t[2]);
  }
  return total / static_cast<double>(settings_.size());
}

double ChipLineExperiment::trial(const NoiseConfig& noise, std::mt19937_64& rng) const {
  std::bernoulli_distribution coin(noise.epsilon);
  const bool bc = coin(rng);
  const bool ad = coin(rng);
  return 1.0 - mean_fidelity(noise.sigma_v, bc, ad, rng);
}

TrialExperiment ChipLineExperiment::experiment() const {
  return [this](const ChipConfig&, const NoiseConfig& noise, std::mt19937_64& rng) { return trial(noise, rng); };
}

double NoiseMapPoint::combined_ci() const {
  return std::hypot(physical.ci_half_width, logical.ci_half_width);
}

nlohmann::json NoiseMapPoint::to_json() const {
  return {{"level", level},
          {"physical", physical.to_json()},
          {"logical", logical.to_json()},
          {"delta", delta()},
          {"combined_ci", combined_ci()}};
}

nlohmann::json NoiseMapResult::to_json() const {
  nlohmann::json v = nlohmann::json::array(), d = nlohmann::json::array();
  for (const auto& p : voltage) v.push_back(p.to_json());
  for (const auto& p : distinguishability) d.push_back(p.to_json());
  return {{"trials", trials}, {"seed", seed}, {"voltage", v}, {"distinguishability", d}};
}

NoiseMapResult noise_map(const NoiseMapOptions& options) {
  const ChipConfig config = ChipConfig::ghz(4);
  const ChipLineExperiment physical(Encoding::Physical, config);
  const ChipLineExperiment logical(Encoding::Logical, config);
  NoiseMapResult out;
  out.trials = options.trials;
  out.seed = options.seed;
  auto point = [&](double sigma_v, double epsilon, double level) {
    NoiseConfig noise;
    noise.sigma_v = sigma_v;
    noise.epsilon = epsilon;
    noise.trials = options.trials;
    noise.seed = options.seed;
    NoiseMapPoint p;
    p.level = level;
    p.physical = run_noisy_trials(config, physical.experiment(), noise, false, options.threads);
    p.logical = run_noisy_trials(config, logical.experiment(), noise, false, options.threads);
    return p;
  };
  for (double s : options.sigma_v) out.voltage.push_back(point(s, 0.0, s));
  for (double e : options.epsilon) out.distinguishability.push_back(point(0.0, e, e));
  return out;
}

}  // namespace qg
