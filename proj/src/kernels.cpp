// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0

#include "kernels.hpp"

#include <algorithm>
#include <string>

namespace qg::detail {

std::vector<std::uint64_t> offsets(int total_bits, const std::vector<int>& pos) {
  const int k = static_cast<int>(pos.size());
  std::vector<std::uint64_t> off(std::size_t{1} << k, 0);
  for (std::size_t a = 0; a < off.size(); ++a) {
    for (int j = 0; j < k; ++j) {
      if ((a >> (k - 1 - j)) & 1U) off[a] |= bit_of(total_bits, pos[j]);
    }
  }
  return off;
}

std::vector<std::uint64_t> bases(int total_bits, const std::vector<int>& pos) {
  std::vector<int> bits;
  for (int p : pos) bits.push_back(total_bits - 1 - p);
  std::sort(bits.begin(), bits.end());
  const std::uint64_t count = std::uint64_t{1} << (total_bits - static_cast<int>(pos.size()));
  std::vector<std::uint64_t> out(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    // Spread i over the non-target bits by inserting zeros, low bit first.
    std::uint64_t x = i;
    for (int b : bits) {
      const std::uint64_t low = x & ((std::uint64_t{1} << b) - 1);
      x = ((x >> b) << (b + 1)) | low;
    }
    out[i] = x;
  }
  return out;
}

void apply_gate(cplx* data, int total_bits, const Mat& gate, const std::vector<int>& pos) {
  const auto off = offsets(total_bits, pos);
  const auto base = bases(total_bits, pos);
  const std::size_t m = off.size();
  std::vector<cplx> in(m), out(m);
  for (std::uint64_t b : base) {
    for (std::size_t a = 0; a < m; ++a) in[a] = data[b + off[a]];
    for (std::size_t r = 0; r < m; ++r) {
      cplx acc = 0.0;
      for (std::size_t c = 0; c < m; ++c) acc += gate(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * in[c];
      out[r] = acc;
    }
    for (std::size_t a = 0; a < m; ++a) data[b + off[a]] = out[a];
  }
}

Vec contract(const cplx* data, int total_bits, const std::vector<int>& pos, const Vec& coef) {
  const auto off = offsets(total_bits, pos);
  const auto base = bases(total_bits, pos);
  Vec out(static_cast<Eigen::Index>(base.size()));
  for (std::size_t i = 0; i < base.size(); ++i) {
    cplx acc = 0.0;
    for (std::size_t a = 0; a < off.size(); ++a) acc += coef(static_cast<Eigen::Index>(a)) * data[base[i] + off[a]];
    out(static_cast<Eigen::Index>(i)) = acc;
  }
  return out;
}

void check_targets(int n, const std::vector<int>& targets) {
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= n) {
      throw Error("qubit index " + std::to_string(targets[i]) + " out of range for " +
                  std::to_string(n) + " qubits");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (targets[i] == targets[j]) throw Error("repeated target qubit");
    }
  }
}

}  // namespace qg::detail
