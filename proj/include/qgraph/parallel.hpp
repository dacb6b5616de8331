// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0
//
// Work splitting and seed derivation. Results never depend on the thread
// count: every work item owns its seed and writes its own output slot.

#pragma once

#include <cstdint>
#include <functional>

namespace qg {

// QGRAPH_THREADS when set to a positive integer, else the hardware count.
int thread_count();

// Calls fn(i) for i in [0, n) on up to `threads` workers (0 = thread_count()).
// The first exception thrown by any item is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads = 0);

// Independent 64-bit seed for stream `index` of `base` (SplitMix64 mix).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace qg
