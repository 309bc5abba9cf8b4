// SPDX-License-Identifier: Apache-2.0
#include "formsum/coefficients.hpp"

#include <gtest/gtest.h>

#include "formsum/multipliers.hpp"

namespace formsum {
namespace {

TEST(Realize, DeltaTableAtOrigin) {
  const TorusGrid grid(1, 1);
  const SpectralField f = realize(CoefficientSpec::delta({0.0}), grid);
  const double expected = std::pow(kTwoPi, -0.5);
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    EXPECT_NEAR(std::abs(f.coeffs(i) - expected), 0.0, 1e-15);
}

TEST(Realize, DeltaTableOffOrigin) {
  const TorusGrid grid(1, 8);
  const double x0 = 1.23;
  const SpectralField f = realize(CoefficientSpec::delta({x0}), grid);
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const Mode m = grid.mode_at(i);
    const auto expected = std::pow(kTwoPi, -0.5) * std::exp(std::complex<double>(0, -m[0] * x0));
    EXPECT_NEAR(std::abs(f.coeffs(i) - expected), 0.0, 1e-14);
  }
}

TEST(Realize, ConstantProjectsToMeanMode) {
  const TorusGrid grid(1, 6);
  const SpectralField f = realize(CoefficientSpec::constant(1.0), grid);
  EXPECT_NEAR(std::abs(f.coeffs(grid.index_of({0, 0})) - std::sqrt(kTwoPi)), 0.0, 1e-12);
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    if (i != grid.index_of({0, 0})) EXPECT_NEAR(std::abs(f.coeffs(i)), 0.0, 1e-12);
}

// the derivative of the point mass must agree with the derivative operator
// applied to the point-mass table; in particular the table is antisymmetric
TEST(Realize, DeltaDerivativeConsistentWithSymbol) {
  const TorusGrid grid(1, 10);
  const SpectralField direct =
      realize(CoefficientSpec::delta_derivative({0.0}, MultiIndex({1})), grid);
  const SpectralField via_symbol =
      apply_derivative(realize(CoefficientSpec::delta({0.0}), grid), MultiIndex({1}));
  EXPECT_NEAR((direct.coeffs - via_symbol.coeffs).norm(), 0.0, 1e-14);
  for (int j = 1; j <= 10; ++j) {
    const auto plus = direct.coeffs(grid.index_of({j, 0}));
    const auto minus = direct.coeffs(grid.index_of({-j, 0}));
    EXPECT_NEAR(std::abs(plus + minus), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(plus) - std::pow(kTwoPi, -0.5) * j, 0.0, 1e-13);
  }
}

TEST(Realize, FourierTableIsLinear) {
  const TorusGrid band(1, 4), grid(1, 8);
  Rng rng(5);
  SpectralField a(band, rng.complex_gaussian_vector(band.size()));
  SpectralField b(band, rng.complex_gaussian_vector(band.size()));
  SpectralField combo(band, a.coeffs + 3.0 * b.coeffs);
  const Eigen::VectorXcd lhs = realize(CoefficientSpec::fourier_table(combo), grid).coeffs;
  const Eigen::VectorXcd rhs = realize(CoefficientSpec::fourier_table(a), grid).coeffs +
                               3.0 * realize(CoefficientSpec::fourier_table(b), grid).coeffs;
  EXPECT_EQ((lhs - rhs).norm(), 0.0);
}

TEST(Realize, DimensionMismatchRejected) {
  EXPECT_THROW(realize(CoefficientSpec::delta({0.0, 0.0}), TorusGrid(1, 4)), PreconditionError);
  EXPECT_THROW(realize(CoefficientSpec::delta({0.0}), TorusGrid(2, 4)), PreconditionError);
}

TEST(Mollify, PlateauWindowIsIdentityPastBand) {
  const TorusGrid grid(1, 16);
  const CoefficientSpec spec = CoefficientSpec::delta({0.5});
  const SpectralField plain = realize(spec, grid);
  const SpectralField molly = mollify(spec, MollifierSpec::fejer(16), grid);
  EXPECT_EQ((plain.coeffs - molly.coeffs).norm(), 0.0);
}

TEST(Mollify, WideGaussianLeavesOnlyTheMean) {
  const TorusGrid grid(1, 16);
  const SpectralField molly = mollify(CoefficientSpec::delta({0.0}), MollifierSpec::gaussian(6.0), grid);
  SpectralField mean(grid);
  mean.coeffs(grid.index_of({0, 0})) = molly.coeffs(grid.index_of({0, 0}));
  EXPECT_LT(sobolev_norm(SpectralField(grid, molly.coeffs - mean.coeffs), 0.0), 1e-14);
}

TEST(Mollify, DampingNeverGrowsAMode) {
  const TorusGrid grid(2, 6);
  const CoefficientSpec spec = CoefficientSpec::delta({0.3, -0.4});
  const SpectralField plain = realize(spec, grid);
  for (const MollifierSpec m : {MollifierSpec::gaussian(0.37), MollifierSpec::fejer(2)}) {
    const SpectralField molly = mollify(spec, m, grid);
    for (Eigen::Index i = 0; i < grid.size(); ++i)
      EXPECT_LE(std::abs(molly.coeffs(i)), std::abs(plain.coeffs(i)) + 1e-15);
  }
}

// multiplier-norm distance of the mollified point mass to its limit, frozen
// from an independent dense-SVD computation at N = 64
TEST(Mollify, GaussianDistanceToDeltaDecreases) {
  const TorusGrid grid(1, 64);
  const TorusGrid wide(1, 128);
  const CoefficientSpec delta = CoefficientSpec::delta({0.0});
  const SpectralField limit = realize(delta, wide);
  std::vector<double> values;
  for (double h : {1.0, 0.5, 0.25, 0.125}) {
    SpectralField diff = mollify(delta, MollifierSpec::gaussian(h), wide);
    diff.coeffs -= limit.coeffs;
    values.push_back(multiplier_norm(assemble(diff, 1.0, 1.0, grid)));
  }
  EXPECT_NEAR(values[0], 3.794887e-01, 1e-6);
  EXPECT_NEAR(values[3], 1.584994e-01, 1e-6);
  for (std::size_t i = 1; i < values.size(); ++i) EXPECT_LT(values[i], values[i - 1]);
}

TEST(LpNorm, ConstantClosedForm) {
  for (int n : {1, 2}) {
    const TorusGrid grid(n, n == 1 ? 16 : 6);
    const SpectralField f = realize(CoefficientSpec::constant(1.0), grid);
    for (double p : {1.5, 2.0, 4.0}) {
      const LpNormResult r = lp_sobolev_norm(f, {0.0, p, 0});
      EXPECT_NEAR(r.value, std::pow(kTwoPi, n / p), 1e-10 * r.value);
    }
  }
}

TEST(LpNorm, PTwoMatchesParseval) {
  const TorusGrid grid(1, 12);
  Rng rng(17);
  const SpectralField f(grid, rng.complex_gaussian_vector(grid.size()));
  for (double gamma : {-1.0, 0.0, 1.5}) {
    const LpNormResult r = lp_sobolev_norm(f, {gamma, 2.0, 0});
    EXPECT_NEAR(r.value, sobolev_norm(f, gamma), 1e-10 * r.value);
  }
}

TEST(LpNorm, CosineFourthPowerClosedForm) {
  // f = e_1 + e_{-1} = 2 cos(x)/sqrt(2pi); ||f||_{L4}^4 = 3/pi
  const TorusGrid grid(1, 16);
  SpectralField f(grid);
  f.coeffs(grid.index_of({1, 0})) = 1.0;
  f.coeffs(grid.index_of({-1, 0})) = 1.0;
  const LpNormResult r = lp_sobolev_norm(f, {0.0, 4.0, 0});
  EXPECT_NEAR(r.value, std::pow(3.0 / M_PI, 0.25), 1e-12);
}

TEST(LpNorm, MonotoneInSmoothness) {
  const TorusGrid grid(1, 12);
  Rng rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    const SpectralField f(grid, rng.complex_gaussian_vector(grid.size()));
    for (double p : {1.5, 3.0, 4.0}) {
      double prev = 0.0;
      for (double gamma : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
        const double v = lp_sobolev_norm(f, {gamma, p, 0}).value;
        EXPECT_GE(v, prev * (1.0 - 1e-12));
        prev = v;
      }
    }
  }
}

TEST(LpNorm, RejectsBadExponentAndCoarseQuadrature) {
  const TorusGrid grid(1, 8);
  const SpectralField f = realize(CoefficientSpec::constant(1.0), grid);
  EXPECT_THROW(lp_sobolev_norm(f, {0.0, 1.0, 0}), PreconditionError);
  EXPECT_THROW(lp_sobolev_norm(f, {0.0, 2.0, 16}), PreconditionError);
}

TEST(Tensorize, DeltaTimesOne) {
  const TorusGrid grid(2, 4);
  const CoefficientSpec t = tensorize(CoefficientSpec::delta({0.0}), CoefficientSpec::constant(1.0));
  const SpectralField f = realize(t, grid);
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const Mode m = grid.mode_at(i);
    const double expected = m[1] == 0 ? std::pow(kTwoPi, -0.5) * std::sqrt(kTwoPi) : 0.0;
    EXPECT_NEAR(std::abs(f.coeffs(i)) - expected, 0.0, 1e-12);
  }
}

TEST(Tensorize, OneTimesOneIsConstant) {
  const TorusGrid grid(2, 3);
  const CoefficientSpec t =
      tensorize(CoefficientSpec::constant(1.0), CoefficientSpec::constant(1.0));
  const SpectralField f = realize(t, grid);
  EXPECT_NEAR(std::abs(f.coeffs(grid.index_of({0, 0})) - kTwoPi), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(f.evaluate({0.7, 1.9}) - 1.0), 0.0, 1e-10);
}

TEST(Tensorize, BoundedFactorBoundHolds) {
  // tensor multiplier norm <= 1D multiplier norm * sup|psi| * (1 + eps_N)
  const CoefficientSpec phi = CoefficientSpec::delta({0.0});
  const CoefficientSpec psi = CoefficientSpec::sinusoid(0, 1.0, 1.0);
  const CoefficientSpec tensor = tensorize(phi, psi, 1.0);
  for (int N : {8, 12, 16}) {
    const TorusGrid grid2(2, N), grid1(1, N);
    const double n2 = multiplier_norm(assemble(tensor, 1.0, 1.0, grid2));
    const double n1 = multiplier_norm(assemble(phi, 1.0, 1.0, grid1));
    EXPECT_LE(n2, n1 * 1.0 * 1.05);
  }
}

TEST(Tensorize, RejectsNonScalarFactors) {
  EXPECT_THROW(tensorize(CoefficientSpec::delta({0.0, 0.0}), CoefficientSpec::constant(1.0)),
               PreconditionError);
}

TEST(Serialization, TaggedUnionRoundTrip) {
  const TorusGrid band(1, 3);
  Rng rng(29);
  const std::vector<CoefficientSpec> specs = {
      CoefficientSpec::delta({0.25}, {-2.0, 0.5}),
      CoefficientSpec::delta_derivative({0.0}, MultiIndex({1})),
      CoefficientSpec::fourier_table(SpectralField(band, rng.complex_gaussian_vector(band.size()))),
      CoefficientSpec::constant({1.0, -0.5}),
      CoefficientSpec::sinusoid(0, 2.0, 0.5, 0.1, 1.0),
      tensorize(CoefficientSpec::delta({0.0}), CoefficientSpec::sinusoid(0, 1.0, 1.0), 1.0),
  };
  const TorusGrid grid1(1, 6), grid2(2, 6);
  for (const auto& spec : specs) {
    const CoefficientSpec back = coefficient_from_json(coefficient_to_json(spec));
    const TorusGrid& grid = spec.dim() == 2 ? grid2 : grid1;
    EXPECT_NEAR((realize(spec, grid).coeffs - realize(back, grid).coeffs).norm(), 0.0, 1e-14);
  }
  EXPECT_THROW(coefficient_to_json(CoefficientSpec::smooth(
                   [](const std::array<double, 2>&) { return std::complex<double>(0.0); })),
               ConfigError);
  EXPECT_THROW(coefficient_from_json({{"variant", "nope"}}), ConfigError);
}

}  // namespace
}  // namespace formsum
