// SPDX-License-Identifier: Apache-2.0
#include "formsum/spectra.hpp"

#include <Eigen/Eigenvalues>

#include <atomic>
#include <cmath>
#include <thread>

namespace formsum {

namespace {

void parallel_rows(int count, int threads, const std::function<void(int)>& work) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<int> next{0};
  const int workers = std::min(threads, count);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        while (true) {
          const int i = next.fetch_add(1);
          if (i >= count) break;
          work(i);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

Eigen::VectorXd sobolev_gram_diagonal(const TorusGrid& grid, double s) {
  Eigen::VectorXd d(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    d(i) = std::pow(1.0 + TorusGrid::abs2(grid.mode_at(i)), s);
  return d;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return !v.empty();
}

Matrix invert_checked(const Matrix& a, const char* what) {
  const Eigen::Index n = a.rows();
  Eigen::PartialPivLU<Matrix> lu(a);
  Matrix inv = lu.solve(Matrix::Identity(n, n));
  const double resid = (a * inv - Matrix::Identity(n, n)).norm();
  if (!std::isfinite(resid) || resid > 1e-8 * std::sqrt(static_cast<double>(n)))
    throw NumericError(std::string("convergence_study: failed to invert ") + what);
  return inv;
}

}  // namespace

std::string to_string(LowerVerdict v) {
  switch (v) {
    case LowerVerdict::pass: return "pass";
    case LowerVerdict::fail: return "fail";
    case LowerVerdict::not_asserted: return "not_asserted";
    case LowerVerdict::not_applicable: return "not_applicable";
  }
  return "unknown";
}

SpectrumReport compute_spectrum(const GeneralizedSum& sum, const SpectralWindow& window) {
  const Eigensystem es = eigen_decompose(sum.s);
  SpectrumReport report;
  report.window = window;
  report.shift_removed = sum.rho0;
  report.hermitian = es.hermitian;
  report.max_backward_error = es.max_backward_error;
  report.eigenvalues = es.values.array() - std::complex<double>(sum.rho0, 0.0);

  // eigenvalues lie in the closure of the numerical range, hence in the sector
  const double tan_theta = std::tan(sum.sector.half_angle);
  double scale = 1.0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) scale = std::max(scale, std::abs(es.values(i)));
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    const std::complex<double> z = es.values(i);  // in the shifted plane
    const double slack = 1e-8 * scale + 1e-9;
    if (std::abs(z.imag()) > tan_theta * (z.real() + sum.sector.vertex) + slack)
      throw NumericError("compute_spectrum: eigenvalue escaped the sector estimate");
  }
  return report;
}

Semidistances semidistances(const SpectrumReport& a, const SpectrumReport& b,
                            const SpectralWindow& window) {
  auto one_sided = [&](const Vector& from, const Vector& to, bool& empty) {
    double sup = 0.0;
    bool any = false;
    for (Eigen::Index i = 0; i < from.size(); ++i) {
      if (!window.contains(from(i))) continue;
      any = true;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < to.size(); ++j)
        best = std::min(best, std::abs(from(i) - to(j)));
      sup = std::max(sup, best);
    }
    empty = !any;
    return any ? sup : 0.0;
  };
  Semidistances out;
  out.upper = one_sided(a.eigenvalues, b.eigenvalues, out.a_window_empty);
  out.lower = one_sided(b.eigenvalues, a.eigenvalues, out.b_window_empty);
  return out;
}

ConvergenceReport convergence_study(const OperatorSpec& spec, const TorusGrid& grid,
                                    const std::vector<MollifierSpec>& schedule,
                                    const StudyOptions& options, GeneralizedSum* limit_out) {
  spec.validate();
  if (schedule.empty()) throw PreconditionError("convergence_study: empty mollifier schedule");

  const Eigen::Index dim = grid.size();
  const Matrix t = assemble_principal(spec, grid, true);
  const Matrix t_unshifted = t - spec.rho0 * Matrix::Identity(dim, dim);
  const CoercivityReport coercivity = verify_garding(t_unshifted, spec, grid);

  const LowerAssembly limit_lower = assemble_lower(spec, grid, nullptr, true);
  const Matrix h1_gram = sobolev_gram_diagonal(grid, spec.m).asDiagonal();
  const RelativeBoundCertificate certificate = certify_relative_bound(
      limit_lower.q, h1_gram, options.eps_target, 100, options.probe_seed);

  GeneralizedSum limit = build_generalized_sum(t, limit_lower.q, coercivity, certificate, spec.rho0,
                                               100, options.probe_seed);

  ConvergenceReport report;
  report.coercivity = coercivity;
  report.certificate = certificate;
  report.limit_sector = limit.sector;
  report.window = options.window;
  report.t0_inv_norm = operator_norm(limit.t0_inv_sqrt) * operator_norm(limit.t0_inv_sqrt);

  const SpectrumReport limit_spectrum = compute_spectrum(limit, options.window);
  report.limit_eigenvalues = limit_spectrum.eigenvalues;

  const Eigen::VectorXd ginv = sobolev_gram_diagonal(grid, -0.5 * spec.m);  // (1+|j|^2)^{-m/2}
  const double min_weight = sobolev_gram_diagonal(grid, spec.m).minCoeff();

  struct RowData {
    Matrix q_n;
    double q_gap = 0.0;
    double mid = 0.0;
    double z_herm_min = 0.0;
    SpectrumReport spectrum{Vector{}, SpectralWindow{}, 0.0, false, 0.0};
    Semidistances dist;
  };
  const int count = static_cast<int>(schedule.size());
  std::vector<RowData> data(count);

  parallel_rows(count, options.threads, [&](int i) {
    RowData& row = data[i];
    row.q_n = assemble_lower(spec, grid, &schedule[i], false).q;
    const Matrix dq = limit_lower.q - row.q_n;
    row.q_gap = operator_norm(ginv.asDiagonal() * dq * ginv.asDiagonal());
    row.mid = operator_norm(limit.t0_inv_sqrt * dq * limit.t0_inv_sqrt);
    const Matrix z_n = limit.t0_inv_sqrt * (t + row.q_n) * limit.t0_inv_sqrt;
    row.z_herm_min = lambda_min_hermitian(hermitian_part(z_n));

    GeneralizedSum approx;  // spectrum only needs s and the sector guard
    approx.s = t + row.q_n;
    approx.rho0 = spec.rho0;
    const Eigensystem es = eigen_decompose(approx.s);
    row.spectrum.window = options.window;
    row.spectrum.shift_removed = spec.rho0;
    row.spectrum.hermitian = es.hermitian;
    row.spectrum.max_backward_error = es.max_backward_error;
    row.spectrum.eigenvalues = es.values.array() - std::complex<double>(spec.rho0, 0.0);
    row.dist = semidistances(row.spectrum, limit_spectrum, options.window);
  });

  // common T0-weighted resolvent point certifying ||(Z_n + rho)^{-1}|| <= 1/c1
  double z_min_all = limit.z_herm_min;
  for (const auto& row : data) z_min_all = std::min(z_min_all, row.z_herm_min);
  const double rho = std::max(0.0, coercivity.c1 - z_min_all) + 1.0;
  report.rho_reference = rho;

  const Matrix r_limit = invert_checked(limit.s + rho * limit.t0, "S + rho T0");
  const Matrix z_limit_inv =
      invert_checked(limit.z + rho * Matrix::Identity(dim, dim), "Z + rho");

  report.rows.resize(count);
  parallel_rows(count, options.threads, [&](int i) {
    const RowData& rd = data[i];
    StudyRow row;
    row.n = i + 1;
    row.mollifier_parameter = schedule[i].parameter;
    row.q_norm_gap = rd.q_gap;
    row.d_upper = rd.dist.upper;
    row.d_lower = rd.dist.lower;
    row.middle_factor = rd.mid;
    row.middle_ok = rd.mid <= rd.q_gap / (coercivity.c1 * min_weight) + 1e-8;

    const Matrix r_n = invert_checked(t + rd.q_n + rho * limit.t0, "S_n + rho T0");
    row.resolvent_diff = operator_norm(r_n - r_limit);
    row.chain_bound = report.t0_inv_norm * rd.q_gap / (coercivity.c1 * coercivity.c1);
    row.chain_ok = row.resolvent_diff <= row.chain_bound + 1e-8;

    if (options.check_identity) {
      const Matrix z_n = limit.t0_inv_sqrt * (t + rd.q_n) * limit.t0_inv_sqrt;
      const Matrix zn_inv = invert_checked(z_n + rho * Matrix::Identity(dim, dim), "Z_n + rho");
      const Matrix mid = limit.t0_inv_sqrt * (limit_lower.q - rd.q_n) * limit.t0_inv_sqrt;
      const Matrix rhs = limit.t0_inv_sqrt * zn_inv * mid * z_limit_inv * limit.t0_inv_sqrt;
      const Matrix lhs = r_n - r_limit;
      const double lhs_norm = operator_norm(lhs);
      const double diff_norm = operator_norm(lhs - rhs);
      const double cancellation_floor = 1e-13 * (r_n.norm() + r_limit.norm());
      row.identity_residual = lhs_norm < 1e-300 ? diff_norm : diff_norm / lhs_norm;
      row.identity_ok = diff_norm <= 1e-10 * lhs_norm + cancellation_floor;
    }
    report.rows[i] = row;
  });

  std::vector<double> qs, rs, dus;
  for (const auto& r : report.rows) {
    qs.push_back(r.q_norm_gap);
    rs.push_back(r.resolvent_diff);
    dus.push_back(r.d_upper);
  }
  report.q_gap_decreasing = strictly_decreasing(qs);
  report.resolvent_decreasing = strictly_decreasing(rs);
  report.d_upper_decreasing = strictly_decreasing(dus);
  report.chain_all_ok = true;
  for (const auto& r : report.rows) report.chain_all_ok = report.chain_all_ok && r.chain_ok;
  report.final_d_upper = report.rows.back().d_upper;
  report.final_d_lower = report.rows.back().d_lower;
  report.upper_conv = report.final_d_upper <= options.upper_tol;
  report.lower_conv = LowerVerdict::not_asserted;

  if (limit_out) *limit_out = std::move(limit);
  return report;
}

CompactCheckVerdict symmetric_compact_check(const GeneralizedSum& limit,
                                            const ConvergenceReport& study, double semidist_tol,
                                            double hermitian_tol, double proxy_threshold) {
  CompactCheckVerdict verdict;

  const double herm_gap = (limit.s - limit.s.adjoint()).norm();
  if (herm_gap > hermitian_tol * std::max(1.0, limit.s.norm())) {
    verdict.applicable = false;
    verdict.reason = "limit sum is not Hermitian";
    return verdict;
  }

  // compactness proxy: singular values of T0^{-1/2} Q T0^{-1/2} (the H^m
  // normalization up to the c1/c2 equivalence) must collapse within the
  // first quarter of indices
  const Eigen::Index dim = limit.q.rows();
  const Matrix weighted = limit.t0_inv_sqrt * limit.q * limit.t0_inv_sqrt;
  Eigen::SelfAdjointEigenSolver<Matrix> es(weighted.adjoint() * weighted, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericError("symmetric_compact_check: singular value computation failed");
  Eigen::VectorXd sv = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();  // ascending
  const double sigma_max = sv(dim - 1);
  const Eigen::Index quarter = dim - 1 - static_cast<Eigen::Index>((dim + 3) / 4);
  const double sigma_quarter = sv(quarter);
  verdict.sigma_quarter_ratio = sigma_max > 0.0 ? sigma_quarter / sigma_max : 0.0;
  if (sigma_max > 0.0 && verdict.sigma_quarter_ratio >= proxy_threshold) {
    verdict.applicable = false;
    verdict.reason = "weighted perturbation fails the compactness decay proxy";
    return verdict;
  }

  verdict.applicable = true;
  std::vector<double> dus, dls;
  for (const auto& r : study.rows) {
    verdict.evidence.push_back({r.n, r.d_upper, r.d_lower});
    dus.push_back(r.d_upper);
    dls.push_back(r.d_lower);
  }
  const bool upper_ok = strictly_decreasing(dus) && dus.back() <= semidist_tol;
  const bool lower_ok = strictly_decreasing(dls) && dls.back() <= semidist_tol;
  verdict.passed = upper_ok && lower_ok;
  verdict.reason = verdict.passed ? "two-sided spectral convergence verified"
                                  : "semidistances did not reach the tolerance";
  return verdict;
}

}  // namespace formsum
