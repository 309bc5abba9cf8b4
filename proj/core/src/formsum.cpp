// SPDX-License-Identifier: Apache-2.0
#include "formsum/formsum.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace formsum {

namespace {

// (2pi)^{-n/2} phi_{i-j} over the trial band; out-of-band phi counts as 0.
Matrix convolution_matrix(const SpectralField& phi, const TorusGrid& trial) {
  const Eigen::Index dim = trial.size();
  const double scale = std::pow(kTwoPi, -0.5 * trial.dim());
  Matrix c(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Mode mi = trial.mode_at(i);
    for (Eigen::Index j = 0; j < dim; ++j) {
      const Mode mj = trial.mode_at(j);
      c(i, j) = scale * phi.at({mi[0] - mj[0], mi[1] - mj[1]});
    }
  }
  return c;
}

Eigen::VectorXd symbol_diagonal(const TorusGrid& grid, const MultiIndex& alpha) {
  Eigen::VectorXd d(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) d(i) = derivative_symbol(grid.mode_at(i), alpha);
  return d;
}

std::vector<MultiIndex> multi_indices_of_order(int dim, int order) {
  std::vector<MultiIndex> out;
  if (dim == 1) {
    out.emplace_back(std::vector<int>{order});
  } else {
    for (int i = order; i >= 0; --i) out.emplace_back(std::vector<int>{i, order - i});
  }
  return out;
}

// T contribution of one entry: S_alpha^* C_c S_beta, coefficient realized at
// twice the trial band so every in-band mode difference is exact.
Matrix entry_matrix(const OperatorEntry& entry, const TorusGrid& grid) {
  const TorusGrid wide(grid.dim(), 2 * grid.bandlimit());
  const SpectralField table = realize(entry.coef, wide);
  Matrix c = convolution_matrix(table, grid);
  const Eigen::VectorXd sa = symbol_diagonal(grid, entry.alpha);
  const Eigen::VectorXd sb = symbol_diagonal(grid, entry.beta);
  return sa.asDiagonal() * c * sb.asDiagonal();
}

Matrix entry_matrix_mollified(const OperatorEntry& entry, const TorusGrid& grid,
                              const MollifierSpec& m) {
  const TorusGrid wide(grid.dim(), 2 * grid.bandlimit());
  const SpectralField table = mollify(entry.coef, m, wide);
  Matrix c = convolution_matrix(table, grid);
  const Eigen::VectorXd sa = symbol_diagonal(grid, entry.alpha);
  const Eigen::VectorXd sb = symbol_diagonal(grid, entry.beta);
  return sa.asDiagonal() * c * sb.asDiagonal();
}

Eigen::VectorXd sobolev_gram_diagonal(const TorusGrid& grid, double s) {
  Eigen::VectorXd d(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    d(i) = std::pow(1.0 + TorusGrid::abs2(grid.mode_at(i)), s);
  return d;
}

}  // namespace

void OperatorSpec::validate() const {
  if (m < 1) throw PreconditionError("OperatorSpec: m must be >= 1");
  if (dim != 1 && dim != 2) throw PreconditionError("OperatorSpec: dimension must be 1 or 2");
  if (rho0 < 0.0) throw PreconditionError("OperatorSpec: rho0 must be >= 0");
  if (principal.empty()) throw PreconditionError("OperatorSpec: principal table is empty");
  for (const auto& e : principal) {
    if (e.alpha.dim() != dim || e.beta.dim() != dim)
      throw PreconditionError("OperatorSpec: principal multi-index dimension mismatch");
    if (e.alpha.order() != m || e.beta.order() != m)
      throw PreconditionError("OperatorSpec: principal entries need |alpha| = |beta| = m");
    if (e.coef.is_singular())
      throw PreconditionError("OperatorSpec: principal coefficient '" + e.coef.label() +
                              "' is not a bounded function");
  }
  for (const auto& e : lower) {
    if (e.alpha.dim() != dim || e.beta.dim() != dim)
      throw PreconditionError("OperatorSpec: lower multi-index dimension mismatch");
    if (e.alpha.order() > m || e.beta.order() > m)
      throw PreconditionError("OperatorSpec: lower entries need |alpha|, |beta| <= m");
    if (e.alpha.order() + e.beta.order() >= 2 * m)
      throw PreconditionError("OperatorSpec: lower entries need |alpha| + |beta| < 2m");
  }
}

Matrix assemble_principal(const OperatorSpec& spec, const TorusGrid& grid, bool include_shift) {
  spec.validate();
  if (grid.dim() != spec.dim)
    throw PreconditionError("assemble_principal: grid dimension does not match the spec");
  const Eigen::Index dim = grid.size();
  Matrix t = Matrix::Zero(dim, dim);
  for (const auto& e : spec.principal) {
    const Matrix em = entry_matrix(e, grid);
    if (!em.allFinite())
      throw PreconditionError("assemble_principal: coefficient '" + e.coef.label() +
                              "' did not realize to finite values");
    t += em;
  }
  if (include_shift) t += spec.rho0 * Matrix::Identity(dim, dim);
  return t;
}

CoercivityReport verify_garding(const Matrix& t_unshifted, const OperatorSpec& spec,
                                const TorusGrid& grid) {
  const Eigen::Index dim = grid.size();
  const Matrix re = hermitian_part(t_unshifted);

  // G_m = sum_{|alpha| = m} S_alpha^* S_alpha is diagonal
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
  for (const MultiIndex& alpha : multi_indices_of_order(grid.dim(), spec.m)) {
    const Eigen::VectorXd s = symbol_diagonal(grid, alpha);
    g += s.cwiseProduct(s);
  }

  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < dim; ++i)
    if (g(i) > 0.0) idx.push_back(i);
  if (idx.empty()) throw PreconditionError("verify_garding: derivative Gram is identically zero");

  Matrix a(idx.size(), idx.size());
  Matrix b = Matrix::Zero(idx.size(), idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    b(r, r) = g(idx[r]);
    for (std::size_t c = 0; c < idx.size(); ++c) a(r, c) = re(idx[r], idx[c]);
  }

  CoercivityReport report;
  report.delta = generalized_lambda_min(a, b);
  if (report.delta <= 0.0)
    throw PreconditionError("coercivity failure: Garding constant delta = " +
                            std::to_string(report.delta));

  const Matrix gram = sobolev_gram_diagonal(grid, spec.m).asDiagonal();
  const Matrix shifted = re + spec.rho0 * Matrix::Identity(dim, dim);
  report.c1 = generalized_lambda_min(shifted, gram);
  report.c2 = generalized_lambda_max(shifted, gram);
  if (report.c1 <= 0.0)
    throw PreconditionError("coercivity failure: shifted form constant c1 = " +
                            std::to_string(report.c1));
  return report;
}

LowerAssembly assemble_lower(const OperatorSpec& spec, const TorusGrid& grid,
                             const MollifierSpec* mollifier, bool with_curves) {
  spec.validate();
  if (grid.dim() != spec.dim)
    throw PreconditionError("assemble_lower: grid dimension does not match the spec");
  const Eigen::Index dim = grid.size();
  LowerAssembly out;
  out.q = Matrix::Zero(dim, dim);

  const int N = grid.bandlimit();
  std::vector<int> cutoffs;
  for (int lam : {0, N / 8, N / 4, N / 2, 3 * N / 4})
    if (cutoffs.empty() || lam > cutoffs.back()) cutoffs.push_back(lam);

  for (const auto& e : spec.lower) {
    out.q += mollifier ? entry_matrix_mollified(e, grid, *mollifier) : entry_matrix(e, grid);
    if (with_curves) {
      const double k = spec.m - e.beta.order();
      const double l = spec.m - e.alpha.order();
      const TorusGrid wide(grid.dim(), 2 * N);
      const SpectralField table =
          mollifier ? mollify(e.coef, *mollifier, wide) : realize(e.coef, wide);
      out.curves.push_back(relative_bound_curve(assemble(table, k, l, grid), cutoffs));
    }
  }
  return out;
}

RelativeBoundCertificate certify_relative_bound(const Matrix& q, const Matrix& h1_gram,
                                                double eps_target, int probe_count,
                                                std::uint64_t probe_seed, int theta_grid) {
  if (!(eps_target > 0.0 && eps_target < 1.0))
    throw PreconditionError("certify_relative_bound: eps_target must lie in (0,1)");
  RelativeBoundCertificate cert;
  cert.eps = eps_target;
  cert.probes = probe_count;

  double m_val = 0.0;
  for (int t = 0; t < theta_grid; ++t) {
    const double theta = kTwoPi * t / theta_grid;
    const Matrix rotated =
        hermitian_part(std::exp(std::complex<double>(0.0, theta)) * q) - eps_target * h1_gram;
    m_val = std::max(m_val, lambda_max_hermitian(rotated));
  }
  cert.M = std::max(0.0, m_val);

  Rng rng(probe_seed);
  double worst = 0.0;
  for (int i = 0; i < probe_count; ++i) {
    const Vector f = rng.unit_vector(q.rows());
    const double lhs = std::abs((f.adjoint() * (q * f))(0));
    const double rhs =
        eps_target * (f.adjoint() * (h1_gram * f))(0).real() + cert.M;  // (f,f) = 1
    worst = std::max(worst, lhs - rhs);
  }
  cert.max_violation = std::max(0.0, worst);
  if (cert.max_violation > 1e-9)
    throw NumericError("certify_relative_bound: certificate violated by " +
                       std::to_string(cert.max_violation) + " on a probe");
  return cert;
}

SectorEstimate sector_estimate(const Matrix& s, int theta_grid) {
  // Support function of the numerical range: h(theta) = lambda_max of the
  // Hermitian part of e^{i theta} S, so W(S) lies in every half-plane
  // Re(e^{i theta} z) <= h(theta). Consecutive support lines intersect in the
  // corners of an outer polygon; the sector is fitted around those corners,
  // which keeps it a certified outer bound (eigenvalues included).
  std::vector<double> support(theta_grid);
  for (int t = 0; t < theta_grid; ++t) {
    const double theta = kTwoPi * t / theta_grid;
    support[t] = lambda_max_hermitian(hermitian_part(std::exp(std::complex<double>(0.0, theta)) * s));
  }

  std::vector<std::complex<double>> corners;
  corners.reserve(theta_grid);
  double scale = 0.0;
  for (int t = 0; t < theta_grid; ++t) {
    const int u = (t + 1) % theta_grid;
    const double a = kTwoPi * t / theta_grid;
    const double b = kTwoPi * u / theta_grid;
    // Re(e^{i a} z) = h(a), Re(e^{i b} z) = h(b) with z = x + i y:
    //   cos(a) x - sin(a) y = h(a), same for b; det = -sin(b - a) != 0.
    const double det = -std::sin(b - a);
    const double x = (-std::sin(b) * support[t] + std::sin(a) * support[u]) / det;
    const double y = (-std::cos(b) * support[t] + std::cos(a) * support[u]) / det;
    corners.emplace_back(x, y);
    scale = std::max(scale, std::abs(corners.back()));
  }

  double min_re = corners.front().real();
  for (const auto& z : corners) min_re = std::min(min_re, z.real());
  const double margin = 1e-9 * std::max(1.0, scale);
  const double vertex = std::max(0.0, -min_re + margin);

  double tan_theta = 0.0;
  for (const auto& z : corners) {
    const double denom = z.real() + vertex;
    const double im = std::abs(z.imag());
    if (denom <= 0.0) {
      if (im > margin)
        throw PreconditionError("sector_estimate: numerical range is not sectorial");
      continue;
    }
    tan_theta = std::max(tan_theta, im / denom);
  }
  if (tan_theta > 1e8)
    throw PreconditionError("sector_estimate: no sector with half-angle < pi/2 fits the range");

  SectorEstimate est;
  est.vertex = vertex;
  est.half_angle = std::atan(tan_theta);
  est.probes = theta_grid;
  return est;
}

GeneralizedSum build_generalized_sum(const Matrix& t, const Matrix& q,
                                     const CoercivityReport& coercivity,
                                     const RelativeBoundCertificate& certificate, double rho0,
                                     int probe_count, std::uint64_t probe_seed) {
  GeneralizedSum sum;
  sum.t = t;
  sum.q = q;
  sum.s = t + q;
  sum.t0 = hermitian_part(t);
  sum.t0_inv_sqrt = inverse_sqrt_hermitian(sum.t0);
  sum.z = sum.t0_inv_sqrt * sum.s * sum.t0_inv_sqrt;
  sum.z_herm_min = lambda_min_hermitian(hermitian_part(sum.z));
  sum.sector = sector_estimate(sum.s);
  sum.coercivity = coercivity;
  sum.rho0 = rho0;

  // numerical-range separation at the certificate shift
  if (certificate.eps < coercivity.c1 && coercivity.c1 > 0.0) {
    const double rho = certificate.M / coercivity.c1;
    const double bound = 1.0 - certificate.eps / coercivity.c1;
    Rng rng(probe_seed);
    const Eigen::Index dim = t.rows();
    for (int i = 0; i < probe_count; ++i) {
      const Vector y = rng.unit_vector(dim);
      const double re = (y.adjoint() * (sum.z * y))(0).real() + rho;
      if (re < bound - 1e-9)
        throw NumericError("build_generalized_sum: numerical-range separation failed on a probe (" +
                           std::to_string(re) + " < " + std::to_string(bound) + ")");
    }
  }
  return sum;
}

Matrix resolvent(const GeneralizedSum& sum, std::complex<double> rho, bool accept_risk, double tol) {
  if (!accept_risk) {
    const double denom = rho.real() + sum.sector.vertex;
    const bool inside =
        denom >= 0.0 && std::abs(rho.imag()) <= std::tan(sum.sector.half_angle) * denom + 1e-9;
    if (inside)
      throw PreconditionError("resolvent: rho lies inside the estimated sector; pass accept_risk");
  }
  return resolvent_matrix(sum.s, rho, tol);
}

double verify_resolvent_identity(const GeneralizedSum& limit, const GeneralizedSum& approx,
                                 double rho) {
  if (limit.t.rows() != approx.t.rows())
    throw PreconditionError("verify_resolvent_identity: dimension mismatch");
  const double t_gap = (limit.t - approx.t).norm();
  if (t_gap > 1e-12 * std::max(1.0, limit.t.norm()))
    throw PreconditionError("verify_resolvent_identity: the sums do not share T");
  if (rho <= 0.0) throw PreconditionError("verify_resolvent_identity: rho must be positive");

  const Eigen::Index dim = limit.t.rows();
  const Matrix identity = Matrix::Identity(dim, dim);

  auto inverse_of = [&](const Matrix& a, const char* what) {
    Eigen::PartialPivLU<Matrix> lu(a);
    Matrix inv = lu.solve(identity);
    const double resid = (a * inv - identity).norm();
    if (!std::isfinite(resid) || resid > 1e-8 * std::sqrt(static_cast<double>(dim)))
      throw NumericError(std::string("verify_resolvent_identity: ") + what +
                         " is not invertible at this rho");
    return inv;
  };

  const Matrix r_limit = inverse_of(limit.s + rho * limit.t0, "S + rho T0");
  const Matrix r_approx = inverse_of(approx.s + rho * limit.t0, "S_n + rho T0");
  const Matrix lhs = r_approx - r_limit;

  const Matrix z_inv = inverse_of(limit.z + rho * identity, "Z + rho");
  const Matrix zn_inv = inverse_of(approx.z + rho * identity, "Z_n + rho");
  const Matrix mid = limit.t0_inv_sqrt * (limit.q - approx.q) * limit.t0_inv_sqrt;
  const Matrix rhs = limit.t0_inv_sqrt * zn_inv * mid * z_inv * limit.t0_inv_sqrt;

  const double lhs_norm = operator_norm(lhs);
  const double diff_norm = operator_norm(lhs - rhs);
  if (lhs_norm < 1e-300) return diff_norm;
  return diff_norm / lhs_norm;
}

}  // namespace formsum
