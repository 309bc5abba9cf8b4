// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>

#include "formsum/errors.hpp"
#include "formsum/rng.hpp"

namespace formsum {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline Matrix hermitian_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

struct NormOptions {
  // Dense eigensolve of A^*A up to this dimension, power iteration beyond.
  Eigen::Index dense_limit = 1600;
  double power_tol = 1e-12;
  int power_max_iter = 200000;
  std::uint64_t power_seed = 0x5EEDULL;
};

// Largest singular value. Dense path is exact-to-LAPACK; the power iteration
// reports a NumericError with its residual if it stalls.
double operator_norm(const Matrix& a, const NormOptions& opts = {});

double lambda_max_hermitian(const Matrix& a);
double lambda_min_hermitian(const Matrix& a);

// Smallest generalized eigenvalue of pencil (A, B), A Hermitian, B Hermitian
// positive definite.
double generalized_lambda_min(const Matrix& a, const Matrix& b);
double generalized_lambda_max(const Matrix& a, const Matrix& b);

// B^{-1/2} for Hermitian positive definite B via spectral decomposition;
// throws NumericError when the smallest eigenvalue is not safely positive.
Matrix inverse_sqrt_hermitian(const Matrix& b, double min_eig_floor = 0.0);

// Dense solve of (A - rho I) X = I with residual enforcement
// ||(A - rho) X - I||_F <= tol; throws NumericError otherwise.
Matrix resolvent_matrix(const Matrix& a, std::complex<double> rho, double tol = 1e-9);

struct Eigensystem {
  Vector values;
  Matrix vectors;
  double max_backward_error = 0.0;
  bool hermitian = false;
};

// Dense eigensolve; uses the Hermitian path when ||A - A^*|| is negligible.
// Backward error per pair is ||Av - lambda v|| / (sigma_est ||v||).
Eigensystem eigen_decompose(const Matrix& a, double backward_error_tol = 1e-9);

}  // namespace formsum
