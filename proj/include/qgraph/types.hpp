// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qg {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// Largest register the dense engine accepts.
inline constexpr int kMaxQubits = 12;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qg
