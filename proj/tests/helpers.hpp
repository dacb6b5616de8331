// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <random>

#include <Eigen/QR>

#include "qgraph/state.hpp"

namespace qg::testing {

inline Mat haar_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat z(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) z(i, j) = cplx(n(rng), n(rng)) / std::sqrt(2.0);
  }
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const cplx ph = r(j, j) / std::abs(r(j, j));
    q.col(j) *= ph;
  }
  return q;
}

inline Vec random_vector(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec v(d);
  for (int i = 0; i < d; ++i) v(i) = cplx(n(rng), n(rng));
  return v.normalized();
}

inline QubitState random_state(int n, std::mt19937_64& rng) {
  return QubitState(n, random_vector(1 << n, rng));
}

// Mixture of `rank` random pure states.
inline DensityOperator random_density(int n, int rank, std::mt19937_64& rng) {
  Mat m = Mat::Zero(1 << n, 1 << n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < rank; ++k) {
    Vec v = random_vector(1 << n, rng);
    m += u(rng) * v * v.adjoint();
  }
  return DensityOperator(n, m);
}

}  // namespace qg::testing
