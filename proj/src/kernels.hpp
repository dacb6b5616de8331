// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0
//
// Index kernels shared by the dense engine. A register of N bits is addressed
// by big-endian positions: position p is bit N-1-p of the flat index.

#pragma once

#include <cstdint>
#include <vector>

#include "qgraph/types.hpp"

namespace qg::detail {

inline std::uint64_t bit_of(int total_bits, int pos) {
  return std::uint64_t{1} << (total_bits - 1 - pos);
}

// Offsets of the 2^k sub-basis states, gate index big-endian over `pos`.
std::vector<std::uint64_t> offsets(int total_bits, const std::vector<int>& pos);

// Flat indices with every target bit clear, ascending. Removing the target
// bits from the i-th entry gives i, so the list doubles as the map from a
// reduced register to the full one.
std::vector<std::uint64_t> bases(int total_bits, const std::vector<int>& pos);

// data <- (gate on pos) data, in place.
void apply_gate(cplx* data, int total_bits, const Mat& gate, const std::vector<int>& pos);

// out[i] = sum_a coef[a] * data[bases[i] + off[a]].
Vec contract(const cplx* data, int total_bits, const std::vector<int>& pos, const Vec& coef);

void check_targets(int n, const std::vector<int>& targets);

}  // namespace qg::detail
