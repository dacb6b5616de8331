// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0

#include "qgraph/fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace qg {

namespace {

double factorial(int n) {
  double f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Amplitude between two photon lists on a network extended by internal labels.
cplx list_amplitude(const Mat& u, const std::vector<LabeledPhoton>& in,
                    const std::vector<LabeledPhoton>& out) {
  const auto n = static_cast<Eigen::Index>(in.size());
  Mat m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto& po = out[static_cast<std::size_t>(r)];
      const auto& pi = in[static_cast<std::size_t>(c)];
      m(r, c) = po.label == pi.label ? u(po.mode, pi.mode) : cplx(0.0);
    }
  }
  auto norm = [](const std::vector<LabeledPhoton>& ps) {
    std::map<std::pair<int, int>, int> occ;
    for (const auto& p : ps) ++occ[{p.mode, p.label}];
    double f = 1;
    for (const auto& [k, v] : occ) f *= factorial(v);
    return f;
  };
  return permanent(m) / std::sqrt(norm(in) * norm(out));
}

std::vector<int> label_multiset(const std::vector<LabeledPhoton>& ps) {
  std::vector<int> l;
  for (const auto& p : ps) l.push_back(p.label);
  std::sort(l.begin(), l.end());
  return l;
}

int log2_size(std::size_t d) {
  int k = 0;
  while ((std::size_t{1} << k) < d) ++k;
  if ((std::size_t{1} << k) != d) throw Error("mode group size must be a power of two");
  return k;
}

struct Branch {
  double weight;
  Vec amps;
};

}  // namespace

cplx permanent(const Mat& a) {
  if (a.rows() != a.cols()) throw Error("permanent of a non-square matrix");
  const int n = static_cast<int>(a.rows());
  if (n == 0) return 1.0;
  if (n > 20) throw Error("permanent too large");
  // Ryser: perm = (-1)^n sum_S (-1)^|S| prod_i sum_{j in S} a_ij, with the
  // subsets visited in Gray-code order so each step updates one column.
  std::vector<cplx> row_sums(static_cast<std::size_t>(n), 0.0);
  cplx total = 0.0;
  std::uint64_t gray = 0;
  for (std::uint64_t k = 1; k < (std::uint64_t{1} << n); ++k) {
    const std::uint64_t next = k ^ (k >> 1);
    const int col = std::countr_zero(next ^ gray);
    const double sgn = (next >> col) & 1U ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) row_sums[static_cast<std::size_t>(i)] += sgn * a(i, col);
    gray = next;
    cplx prod = 1.0;
    for (const auto& s : row_sums) prod *= s;
    total += (std::popcount(gray) % 2 ? -1.0 : 1.0) * prod;
  }
  return (n % 2 ? -1.0 : 1.0) * total;
}

cplx fock_amplitude(const Mat& network, const FockConfiguration& in, const FockConfiguration& out) {
  check_unitary(network);
  const auto m = static_cast<std::size_t>(network.rows());
  if (in.size() != m || out.size() != m) throw Error("Fock configuration length does not match the network");
  auto expand = [](const FockConfiguration& c) {
    std::vector<LabeledPhoton> ps;
    for (std::size_t mode = 0; mode < c.size(); ++mode) {
      if (c[mode] < 0) throw Error("negative occupation");
      for (int k = 0; k < c[mode]; ++k) ps.push_back({static_cast<int>(mode), 0});
    }
    return ps;
  };
  const auto pin = expand(in), pout = expand(out);
  if (pin.size() != pout.size()) throw Error("photon number mismatch");
  if (static_cast<int>(pin.size()) > kMaxPhotons) throw Error("too many photons");
  return list_amplitude(network, pin, pout);
}

std::vector<FockConfiguration> fock_configurations(int modes, int photons) {
  std::vector<FockConfiguration> out;
  FockConfiguration cur(static_cast<std::size_t>(modes), 0);
  auto rec = [&](auto&& self, int mode, int left) -> void {
    if (mode == modes - 1) {
      cur[static_cast<std::size_t>(mode)] = left;
      out.push_back(cur);
      return;
    }
    for (int k = left; k >= 0; --k) {
      cur[static_cast<std::size_t>(mode)] = k;
      self(self, mode + 1, left - k);
    }
  };
  if (modes > 0) rec(rec, 0, photons);
  return out;
}

PostselectResult run_postselected(const Mat& network, const std::vector<FockTerm>& input,
                                  const std::vector<std::vector<int>>& groups,
                                  double distinguishability) {
  check_unitary(network);
  if (distinguishability < 0 || distinguishability > 1) throw Error("distinguishability outside [0, 1]");
  const int modes = static_cast<int>(network.rows());
  std::vector<int> seen(static_cast<std::size_t>(modes), 0);
  std::vector<int> bits;
  for (const auto& g : groups) {
    bits.push_back(log2_size(g.size()));
    for (int m : g) {
      if (m < 0 || m >= modes) throw Error("group mode out of range");
      ++seen[static_cast<std::size_t>(m)];
    }
  }
  if (std::any_of(seen.begin(), seen.end(), [](int s) { return s != 1; })) {
    throw Error("mode groups must partition the network modes");
  }
  const int qubits = std::accumulate(bits.begin(), bits.end(), 0);
  if (input.empty()) throw Error("empty input state");

  // Normalization, merging repeated configurations.
  std::map<std::vector<std::pair<int, int>>, cplx> merged;
  std::set<int> labels;
  for (const auto& t : input) {
    if (t.photons.size() != groups.size()) throw Error("input photon count must equal the group count");
    if (static_cast<int>(t.photons.size()) > kMaxPhotons) throw Error("too many photons");
    std::vector<std::pair<int, int>> key;
    for (const auto& p : t.photons) {
      if (p.mode < 0 || p.mode >= modes) throw Error("photon mode out of range");
      key.emplace_back(p.mode, p.label);
      labels.insert(p.label);
    }
    std::sort(key.begin(), key.end());
    merged[key] += t.amplitude;
  }
  double norm = 0;
  for (const auto& [k, c] : merged) norm += std::norm(c);
  if (std::abs(norm - 1) > 1e-9) throw Error("input Fock state is not normalized");

  const std::vector<int> label_list(labels.begin(), labels.end());
  const std::size_t G = groups.size();

  auto conditional = [&](bool use_labels) {
    std::vector<FockTerm> terms = input;
    if (!use_labels) {
      for (auto& t : terms) {
        for (auto& p : t.photons) p.label = 0;
      }
    }
    const std::vector<int> lab = use_labels ? label_list : std::vector<int>{0};
    const std::size_t L = lab.size();
    std::vector<Vec> out;
    std::size_t assignments = 1;
    for (std::size_t g = 0; g < G; ++g) assignments *= L;
    for (std::size_t a = 0; a < assignments; ++a) {
      std::vector<int> lambda(G);
      std::size_t x = a;
      for (std::size_t g = G; g-- > 0;) {
        lambda[g] = lab[x % L];
        x /= L;
      }
      std::vector<int> lambda_sorted = lambda;
      std::sort(lambda_sorted.begin(), lambda_sorted.end());
      Vec amps = Vec::Zero(Eigen::Index{1} << qubits);
      bool any = false;
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << qubits); ++v) {
        std::vector<LabeledPhoton> outp;
        int shift = qubits;
        for (std::size_t g = 0; g < G; ++g) {
          shift -= bits[g];
          const auto off = static_cast<std::size_t>((v >> shift) & ((1U << bits[g]) - 1));
          outp.push_back({groups[g][off], lambda[g]});
        }
        cplx acc = 0.0;
        for (const auto& t : terms) {
          if (label_multiset(t.photons) != lambda_sorted) continue;
          acc += t.amplitude * list_amplitude(network, t.photons, outp);
        }
        amps(static_cast<Eigen::Index>(v)) = acc;
        any = any || std::abs(acc) > 1e-15;
      }
      if (any) out.push_back(amps);
    }
    return out;
  };

  std::vector<Branch> branches;
  const bool labelled = labels.size() > 1;
  if (!labelled || distinguishability < 1) {
    const double w = labelled ? 1 - distinguishability : 1.0;
    for (auto& v : conditional(false)) branches.push_back({w, v});
  }
  if (labelled && distinguishability > 0) {
    for (auto& v : conditional(true)) branches.push_back({distinguishability, v});
  }

  const auto d = Eigen::Index{1} << qubits;
  Mat rho = Mat::Zero(d, d);
  for (const auto& b : branches) rho += b.weight * b.amps * b.amps.adjoint();
  const double p = rho.trace().real();
  if (p < 1e-12) throw Error("post-selection pattern has zero probability");

  PostselectResult r;
  r.state = DensityOperator(qubits, rho, false);
  r.probability = p;
  if (branches.size() == 1) {
    r.amplitudes = std::sqrt(branches[0].weight) * branches[0].amps;
    r.pure = QubitState(qubits, r.amplitudes);
  }
  return r;
}

}  // namespace qg
