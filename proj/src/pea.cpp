// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0

#include "qgraph/pea.hpp"

#include <cmath>
#include <random>

#include "qgraph/mbqc.hpp"
#include "qgraph/named.hpp"
#include "qgraph/parallel.hpp"

namespace qg {

namespace {

Vec kron_vec(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

struct Layer {
  std::vector<int> qubits;
  std::vector<Vec> basis;
};

// Joint distribution over (left, central, readout) outcomes, flattened as
// (left * nc + central) * nr + readout.
struct Joint {
  std::vector<double> probs;
  int nl = 0, nc = 0, nr = 0;
};

Layer layer(PeaEncoding enc, int column, double angle) {
  if (enc == PeaEncoding::Physical) return {{column}, xy_basis(angle)};
  return {{2 * column, 2 * column + 1}, logical_basis(LogicalKind::XY, angle).vectors};
}

Joint joint_distribution(PeaEncoding enc, const PeaNoise& noise, long long mult, double phi0, double theta) {
  static const QubitState l3 = named_state("L3");
  static const QubitState c6 = named_state("crazy6");
  DensityOperator rho(enc == PeaEncoding::Physical ? l3 : c6);
  const Layer left = layer(enc, 0, 2 * kPi * std::fmod(static_cast<double>(mult) * phi0, 1.0));
  const Layer mid = layer(enc, 1, 0.0);
  const Layer out = layer(enc, 2, -2 * kPi * theta);
  if (noise.dephasing > 0.0) {
    for (int q : mid.qubits) rho = dephase(rho, q, noise.dephasing);
  }
  std::vector<int> targets = left.qubits;
  targets.insert(targets.end(), mid.qubits.begin(), mid.qubits.end());
  targets.insert(targets.end(), out.qubits.begin(), out.qubits.end());

  Joint j;
  j.nl = static_cast<int>(left.basis.size());
  j.nc = static_cast<int>(mid.basis.size());
  j.nr = static_cast<int>(out.basis.size());
  for (const Vec& a : left.basis) {
    for (const Vec& b : mid.basis) {
      const Vec ab = kron_vec(a, b);
      for (const Vec& c : out.basis) {
        const Mat r = project_out(rho, kron_vec(ab, c), targets);
        j.probs.push_back(std::max(0.0, r.trace().real()));
      }
    }
  }
  return j;
}

int true_bit(double phi0, int k) {
  const double scaled = std::floor(phi0 * std::ldexp(1.0, k) + 1e-9);
  return static_cast<int>(std::fmod(scaled, 2.0));
}

}  // namespace

double bit_probability(long long m, double phi0, double theta) {
  if (m < 1) throw Error("bit_probability: M must be at least 1");
  const double c = std::cos(kPi * (static_cast<double>(m) * phi0 - theta));
  return c * c;
}

int PeaRun::correct_bits() const {
  int n = 0;
  for (const auto& b : bits) n += b.correct();
  return n;
}

nlohmann::json PeaRun::to_json() const {
  nlohmann::json j;
  j["phi0"] = phi0;
  j["bits"] = bits_count;
  j["samples"] = samples;
  j["encoding"] = encoding == PeaEncoding::Physical ? "physical" : "logical";
  j["dephasing"] = noise.dephasing;
  j["seed"] = seed;
  j["exact"] = exact;
  j["estimate"] = estimate;
  j["correct_bits"] = correct_bits();
  auto& arr = j["per_bit"] = nlohmann::json::array();
  for (const auto& b : bits) {
    arr.push_back({{"bit", b.index},
                   {"M", b.multiplier},
                   {"theta", b.theta},
                   {"samples", b.samples},
                   {"ones", b.ones},
                   {"attempts", b.attempts},
                   {"p1", b.p1},
                   {"p1_exact", b.p1_exact},
                   {"p1_ideal", b.p1_ideal},
                   {"inferred", b.bit},
                   {"true", b.true_bit},
                   {"correct", b.correct()}});
  }
  return j;
}

PeaRun pea_run(double phi0, const PeaOptions& o) {
  if (!(phi0 >= 0.0 && phi0 < 1.0)) throw Error("pea_run: phi0 must lie in [0, 1)");
  if (o.bits < 1 || o.bits > 20) throw Error("pea_run: bit count must be in 1..20");
  if (o.samples < 1) throw Error("pea_run: need at least one sample");
  if (!(o.noise.dephasing >= 0.0 && o.noise.dephasing <= 1.0)) throw Error("pea_run: dephasing must lie in [0, 1]");

  PeaRun run;
  run.phi0 = phi0;
  run.bits_count = o.bits;
  run.samples = o.samples;
  run.encoding = o.encoding;
  run.noise = o.noise;
  run.seed = o.seed;
  run.exact = o.exact;

  std::vector<int> inferred(o.bits + 1, 0);
  for (int k = o.bits; k >= 1; --k) {
    PeaBit b;
    b.index = k;
    b.multiplier = 1LL << (k - 1);
    for (int j = k + 1; j <= o.bits; ++j) b.theta += inferred[j] * std::ldexp(1.0, -(j - k + 1));
    b.p1_ideal = 1.0 - bit_probability(b.multiplier, phi0, b.theta);
    b.true_bit = true_bit(phi0, k);

    const Joint jd = joint_distribution(o.encoding, o.noise, b.multiplier, phi0, b.theta);
    const double acc0 = jd.probs[0], acc1 = jd.probs[1];
    if (acc0 + acc1 < 1e-14) throw Error("pea_run: post-selected outcome has zero probability");
    b.p1_exact = acc1 / (acc0 + acc1);

    if (o.exact) {
      b.p1 = b.p1_exact;
      b.samples = 0;
      b.bit = b.p1_exact > 0.5 ? 1 : 0;
    } else {
      std::discrete_distribution<int> draw(jd.probs.begin(), jd.probs.end());
      std::vector<int> outcome(o.samples);
      std::vector<long long> tries(o.samples);
      parallel_for(static_cast<std::size_t>(o.samples), [&](std::size_t s) {
        std::mt19937_64 rng(derive_seed(o.seed, (static_cast<std::uint64_t>(k) << 20) + s));
        auto d = draw;
        for (long long t = 1; t <= o.max_attempts; ++t) {
          const int idx = d(rng);
          // Index 0 and 1: left 0, central 0, readout 0 or 1.
          if (idx < 2) {
            outcome[s] = idx;
            tries[s] = t;
            return;
          }
        }
        throw Error("pea_run: no accepted run within the attempt limit");
      });
      b.samples = o.samples;
      for (int s = 0; s < o.samples; ++s) {
        b.ones += outcome[s];
        b.attempts += tries[s];
      }
      b.p1 = static_cast<double>(b.ones) / o.samples;
      b.bit = 2 * b.ones > o.samples ? 1 : 0;
    }
    inferred[k] = b.bit;
    run.bits.push_back(b);
  }
  for (int k = 1; k <= o.bits; ++k) run.estimate += inferred[k] * std::ldexp(1.0, -k);
  return run;
}

std::vector<BitCounts> bit_counts(const PeaRun& run) {
  std::vector<BitCounts> out;
  for (const auto& b : run.bits) {
    if (b.samples == 0) throw Error("bit_counts: exact-mode runs have no samples");
    out.push_back({b.samples, b.true_bit ? b.ones : b.samples - b.ones});
  }
  return out;
}

double bootstrap_confidence(const std::vector<BitCounts>& physical, const std::vector<BitCounts>& logical,
                            int rounds, std::uint64_t seed) {
  if (physical.empty() || physical.size() != logical.size()) {
    throw Error("bootstrap_confidence: count tables must be non-empty and of equal size");
  }
  if (rounds < 1) throw Error("bootstrap_confidence: need at least one round");
  for (const auto* table : {&physical, &logical}) {
    for (const auto& c : *table) {
      if (c.n < 1 || c.correct < 0 || c.correct > c.n) throw Error("bootstrap_confidence: bad counts");
    }
  }
  std::mt19937_64 rng(seed);
  auto count = [&](const std::vector<BitCounts>& t) {
    int n = 0;
    for (const auto& c : t) {
      std::binomial_distribution<int> b(c.n, static_cast<double>(c.correct) / c.n);
      n += 2 * b(rng) > c.n;
    }
    return n;
  };
  int wins = 0;
  for (int r = 0; r < rounds; ++r) {
    const int phys = count(physical);
    const int log = count(logical);
    wins += log > phys;
  }
  return static_cast<double>(wins) / rounds;
}

}  // namespace qg
