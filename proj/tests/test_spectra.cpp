// SPDX-License-Identifier: Apache-2.0
#include "formsum/spectra.hpp"

#include <gtest/gtest.h>

#include <algorithm>

namespace formsum {
namespace {

OperatorSpec well_spec(std::complex<double> coupling) {
  OperatorSpec spec;
  spec.m = 1;
  spec.dim = 1;
  spec.rho0 = 1.0;
  spec.principal.push_back({MultiIndex({1}), MultiIndex({1}), CoefficientSpec::constant(1.0)});
  if (coupling != std::complex<double>{0.0, 0.0})
    spec.lower.push_back({MultiIndex({0}), MultiIndex({0}), CoefficientSpec::delta({0.0}, coupling)});
  return spec;
}

GeneralizedSum build_from_spec(const OperatorSpec& spec, const TorusGrid& grid) {
  const Matrix t = assemble_principal(spec, grid, true);
  const Matrix t0 = t - spec.rho0 * Matrix::Identity(grid.size(), grid.size());
  const CoercivityReport coer = verify_garding(t0, spec, grid);
  const Matrix q = assemble_lower(spec, grid, nullptr, false).q;
  Eigen::VectorXd gram(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    gram(i) = std::pow(1.0 + TorusGrid::abs2(grid.mode_at(i)), spec.m);
  const auto cert = certify_relative_bound(q, Matrix(gram.asDiagonal()), 0.5);
  return build_generalized_sum(t, q, coer, cert, spec.rho0);
}

// secular bound state of the periodic attractive well: kappa tanh(pi kappa) = 1
double kappa_root() {
  double lo = 0.5, hi = 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mid * std::tanh(M_PI * mid) - 1.0 > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

TEST(Spectrum, DiagonalEigenvalues) {
  const TorusGrid grid(1, 10);
  const GeneralizedSum sum = build_from_spec(well_spec({0.0, 0.0}), grid);
  const SpectrumReport rep = compute_spectrum(sum);
  EXPECT_EQ(rep.eigenvalues.size(), grid.size());
  std::vector<double> eigs;
  for (Eigen::Index i = 0; i < rep.eigenvalues.size(); ++i) {
    EXPECT_NEAR(rep.eigenvalues(i).imag(), 0.0, 1e-9);
    eigs.push_back(rep.eigenvalues(i).real());  // shift already removed
  }
  std::sort(eigs.begin(), eigs.end());
  std::vector<double> expected;
  for (int j = -10; j <= 10; ++j) expected.push_back(double(j) * j);
  std::sort(expected.begin(), expected.end());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(eigs[i], expected[i], 1e-9);
}

TEST(Spectrum, HermitianFlagAndBackwardError) {
  const TorusGrid grid(1, 16);
  const GeneralizedSum sum = build_from_spec(well_spec({-2.0, 0.0}), grid);
  const SpectrumReport rep = compute_spectrum(sum);
  EXPECT_TRUE(rep.hermitian);
  EXPECT_LE(rep.max_backward_error, 1e-9);
}

TEST(Semidistances, HandComputedSets) {
  SpectralWindow window{-10.0, 10.0, 10.0};
  SpectrumReport a{Vector(1), window, 0.0, true, 0.0};
  a.eigenvalues << std::complex<double>(0.0, 0.0);
  SpectrumReport b{Vector(2), window, 0.0, true, 0.0};
  b.eigenvalues << std::complex<double>(0.0, 0.0), std::complex<double>(5.0, 0.0);
  const Semidistances d = semidistances(a, b, window);
  EXPECT_EQ(d.upper, 0.0);
  EXPECT_EQ(d.lower, 5.0);

  const Semidistances same = semidistances(b, b, window);
  EXPECT_EQ(same.upper, 0.0);
  EXPECT_EQ(same.lower, 0.0);
}

TEST(Semidistances, EmptyWindowFlagged) {
  SpectralWindow window{100.0, 200.0, 1.0};
  SpectrumReport a{Vector(1), window, 0.0, true, 0.0};
  a.eigenvalues << std::complex<double>(0.0, 0.0);
  const Semidistances d = semidistances(a, a, window);
  EXPECT_TRUE(d.a_window_empty);
  EXPECT_EQ(d.upper, 0.0);
}

TEST(Study, TrivialScheduleGivesZeroRows) {
  // no lower-order part at all: every mollified operator equals the limit
  const TorusGrid grid(1, 16);
  OperatorSpec spec = well_spec({0.0, 0.0});
  StudyOptions options;
  const ConvergenceReport rep = convergence_study(
      spec, grid, {MollifierSpec::gaussian(1.0), MollifierSpec::gaussian(0.5)}, options);
  for (const auto& row : rep.rows) {
    EXPECT_EQ(row.q_norm_gap, 0.0);
    EXPECT_LE(row.resolvent_diff, 1e-12);
    EXPECT_EQ(row.d_upper, 0.0);
    EXPECT_EQ(row.d_lower, 0.0);
    EXPECT_TRUE(row.chain_ok);
  }
}

TEST(Study, DeltaWellSmallGridDynamics) {
  const TorusGrid grid(1, 32);
  OperatorSpec spec = well_spec({-2.0, 0.0});
  std::vector<MollifierSpec> schedule;
  for (double h : {1.0, 0.5, 0.25, 0.125}) schedule.push_back(MollifierSpec::gaussian(h));
  StudyOptions options;
  options.threads = 2;
  GeneralizedSum limit;
  const ConvergenceReport rep = convergence_study(spec, grid, schedule, options, &limit);

  EXPECT_TRUE(rep.q_gap_decreasing);
  EXPECT_TRUE(rep.resolvent_decreasing);
  EXPECT_TRUE(rep.d_upper_decreasing);
  EXPECT_TRUE(rep.chain_all_ok);
  for (const auto& row : rep.rows) {
    EXPECT_TRUE(row.middle_ok);
    EXPECT_TRUE(row.identity_ok);
    EXPECT_EQ(row.d_upper, row.d_lower);  // Hermitian case, full spectra compared
  }
  // thread count must not change the numbers
  StudyOptions serial = options;
  serial.threads = 1;
  const ConvergenceReport rep1 = convergence_study(spec, grid, schedule, serial);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    EXPECT_EQ(rep.rows[i].q_norm_gap, rep1.rows[i].q_norm_gap);
    EXPECT_EQ(rep.rows[i].resolvent_diff, rep1.rows[i].resolvent_diff);
    EXPECT_EQ(rep.rows[i].d_upper, rep1.rows[i].d_upper);
  }
}

TEST(Study, GroundStateApproachesSecularRoot) {
  const TorusGrid grid(1, 128);
  const GeneralizedSum sum = build_from_spec(well_spec({-2.0, 0.0}), grid);
  const SpectrumReport rep = compute_spectrum(sum);
  double lowest = 1e300;
  for (Eigen::Index i = 0; i < rep.eigenvalues.size(); ++i)
    lowest = std::min(lowest, rep.eigenvalues(i).real());
  const double kappa = kappa_root();
  // Galerkin truncation error at N = 128 is below 1.25/N
  EXPECT_NEAR(lowest, -kappa * kappa, 1.5e-2);
  EXPECT_GE(lowest, -kappa * kappa);  // truncation approaches from above
}

TEST(CompactCheck, AppliesToHermitianWellWithZeroPerturbation) {
  const TorusGrid grid(1, 16);
  OperatorSpec spec = well_spec({0.0, 0.0});
  StudyOptions options;
  GeneralizedSum limit;
  const ConvergenceReport rep = convergence_study(
      spec, grid, {MollifierSpec::gaussian(1.0), MollifierSpec::gaussian(0.5)}, options, &limit);
  const CompactCheckVerdict verdict = symmetric_compact_check(limit, rep);
  EXPECT_TRUE(verdict.applicable);
  EXPECT_TRUE(verdict.passed);
}

TEST(CompactCheck, TwoSidedForDeepSchedule) {
  const TorusGrid grid(1, 64);
  OperatorSpec spec = well_spec({-2.0, 0.0});
  std::vector<MollifierSpec> schedule;
  for (double h : {1.0 / 16, 1.0 / 64, 1.0 / 256, 1.0 / 1024}) schedule.push_back(MollifierSpec::gaussian(h));
  StudyOptions options;
  GeneralizedSum limit;
  const ConvergenceReport rep = convergence_study(spec, grid, schedule, options, &limit);
  const CompactCheckVerdict verdict = symmetric_compact_check(limit, rep, 1e-3);
  EXPECT_TRUE(verdict.applicable);
  EXPECT_TRUE(verdict.passed) << verdict.reason;
  EXPECT_LT(verdict.sigma_quarter_ratio, 0.05);
  ASSERT_EQ(verdict.evidence.size(), schedule.size());
}

TEST(CompactCheck, NonHermitianIsNotApplicable) {
  const TorusGrid grid(1, 24);
  OperatorSpec spec = well_spec({0.0, 0.0});
  spec.lower.push_back(
      {MultiIndex({1}), MultiIndex({0}), CoefficientSpec::delta({0.0}, {0.0, 1.0})});
  StudyOptions options;
  GeneralizedSum limit;
  const ConvergenceReport rep =
      convergence_study(spec, grid, {MollifierSpec::gaussian(0.5), MollifierSpec::gaussian(0.25)},
                        options, &limit);
  const CompactCheckVerdict verdict = symmetric_compact_check(limit, rep);
  EXPECT_FALSE(verdict.applicable);
  EXPECT_FALSE(verdict.passed);
}

TEST(Study, RejectsEmptySchedule) {
  const TorusGrid grid(1, 8);
  EXPECT_THROW(convergence_study(well_spec({-1.0, 0.0}), grid, {}, {}), PreconditionError);
}

}  // namespace
}  // namespace formsum
