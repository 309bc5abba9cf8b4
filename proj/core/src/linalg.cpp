// SPDX-License-Identifier: Apache-2.0
#include "formsum/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <sstream>

namespace formsum {

namespace {

double power_iteration_norm(const Matrix& a, const NormOptions& opts) {
  Rng rng(opts.power_seed);
  Vector v = rng.complex_gaussian_vector(a.cols());
  v /= v.norm();
  double sigma2 = 0.0;
  double prev = -1.0;
  for (int it = 0; it < opts.power_max_iter; ++it) {
    Vector w = a.adjoint() * (a * v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    sigma2 = nw;  // Rayleigh quotient of A^*A at unit v equals ||w|| asymptotically
    v = w / nw;
    if (prev >= 0.0 && std::abs(sigma2 - prev) <= opts.power_tol * sigma2) {
      // settle with a couple of confirmation sweeps
      Vector w2 = a.adjoint() * (a * v);
      const double s2 = w2.norm();
      if (std::abs(s2 - sigma2) <= opts.power_tol * s2) return std::sqrt(s2);
    }
    prev = sigma2;
  }
  std::ostringstream msg;
  msg << "operator_norm: power iteration did not converge after " << opts.power_max_iter
      << " iterations (last residual " << std::abs(sigma2 - prev) << ")";
  throw NumericError(msg.str());
}

}  // namespace

double operator_norm(const Matrix& a, const NormOptions& opts) {
  if (a.size() == 0) return 0.0;
  if (std::max(a.rows(), a.cols()) <= opts.dense_limit) {
    if (std::max(a.rows(), a.cols()) <= 32) {
      Eigen::JacobiSVD<Matrix> svd(a);
      return svd.singularValues()(0);
    }
    // sigma_max via the Hermitian square; accurate for the top singular value
    // and much faster than a full complex SVD at these sizes.
    const Matrix g = a.adjoint() * a;
    Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("operator_norm: eigensolver failed");
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  }
  return power_iteration_norm(a, opts);
}

double lambda_max_hermitian(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("lambda_max_hermitian: eigensolver failed");
  return es.eigenvalues().maxCoeff();
}

double lambda_min_hermitian(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("lambda_min_hermitian: eigensolver failed");
  return es.eigenvalues().minCoeff();
}

namespace {
Eigen::VectorXd generalized_spectrum(const Matrix& a, const Matrix& b) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(a, b, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success)
    throw NumericError("generalized eigensolver failed (pencil not definite?)");
  return es.eigenvalues();
}
}  // namespace

double generalized_lambda_min(const Matrix& a, const Matrix& b) {
  return generalized_spectrum(a, b).minCoeff();
}

double generalized_lambda_max(const Matrix& a, const Matrix& b) {
  return generalized_spectrum(a, b).maxCoeff();
}

Matrix inverse_sqrt_hermitian(const Matrix& b, double min_eig_floor) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(b);
  if (es.info() != Eigen::Success) throw NumericError("inverse_sqrt_hermitian: eigensolver failed");
  const Eigen::VectorXd ev = es.eigenvalues();
  const double floor_val = std::max(min_eig_floor, 0.0);
  if (ev.minCoeff() <= floor_val)
    throw NumericError("inverse_sqrt_hermitian: matrix not positive definite (lambda_min = " +
                       std::to_string(ev.minCoeff()) + ")");
  Eigen::VectorXd inv_sqrt = ev.array().pow(-0.5);
  return es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix resolvent_matrix(const Matrix& a, std::complex<double> rho, double tol) {
  const Eigen::Index n = a.rows();
  Matrix shifted = a - rho * Matrix::Identity(n, n);
  Eigen::PartialPivLU<Matrix> lu(shifted);
  Matrix r = lu.solve(Matrix::Identity(n, n));
  const double resid = (shifted * r - Matrix::Identity(n, n)).norm();
  if (!std::isfinite(resid) || resid > tol)
    throw NumericError("resolvent: residual " + std::to_string(resid) +
                       " exceeds tolerance; rho may lie in the spectrum");
  return r;
}

Eigensystem eigen_decompose(const Matrix& a, double backward_error_tol) {
  Eigensystem out;
  const double scale = a.norm();  // Frobenius
  const double herm_gap = (a - a.adjoint()).norm();
  // spectral-norm estimate for the backward-error scale
  double sigma = 0.0;
  {
    Rng rng(17);
    Vector v = rng.complex_gaussian_vector(a.cols());
    v /= v.norm();
    for (int it = 0; it < 40; ++it) {
      Vector w = a.adjoint() * (a * v);
      const double nw = w.norm();
      if (nw == 0.0) break;
      sigma = std::sqrt(nw);
      v = w / nw;
    }
    if (sigma == 0.0) sigma = std::max(scale, 1e-300);
  }
  if (herm_gap <= 1e-12 * std::max(scale, 1.0)) {
    out.hermitian = true;
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(a));
    if (es.info() != Eigen::Success) throw NumericError("eigen_decompose: Hermitian solver failed");
    out.values = es.eigenvalues().cast<std::complex<double>>();
    out.vectors = es.eigenvectors();
  } else {
    Eigen::ComplexEigenSolver<Matrix> es(a);
    if (es.info() != Eigen::Success) throw NumericError("eigen_decompose: solver failed");
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors();
  }
  double max_err = 0.0;
  for (Eigen::Index i = 0; i < out.values.size(); ++i) {
    const Vector v = out.vectors.col(i);
    const double resid = (a * v - out.values(i) * v).norm();
    max_err = std::max(max_err, resid / (sigma * v.norm()));
  }
  out.max_backward_error = max_err;
  if (max_err > backward_error_tol)
    throw NumericError("eigen_decompose: backward error " + std::to_string(max_err) +
                       " exceeds tolerance");
  return out;
}

}  // namespace formsum
