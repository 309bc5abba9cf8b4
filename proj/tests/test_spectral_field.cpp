// SPDX-License-Identifier: Apache-2.0
#include "formsum/spectral_field.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "formsum/rng.hpp"

namespace formsum {
namespace {

SpectralField basis_mode(const TorusGrid& grid, const Mode& m) {
  SpectralField f(grid);
  f.coeffs(grid.index_of(m)) = 1.0;
  return f;
}

SpectralField random_field(const TorusGrid& grid, std::uint64_t seed) {
  Rng rng(seed);
  return SpectralField(grid, rng.complex_gaussian_vector(grid.size()));
}

TEST(SobolevInner, OrthonormalBasis) {
  const TorusGrid grid(1, 4);
  const SpectralField e0 = basis_mode(grid, {0, 0});
  const SpectralField e1 = basis_mode(grid, {1, 0});
  const SpectralField e2 = basis_mode(grid, {2, 0});
  for (double s : {-2.0, 0.0, 0.7, 3.0})
    EXPECT_NEAR(std::abs(sobolev_inner(e0, e0, s) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(sobolev_inner(e1, e1, 1.0).real(), 2.0, 1e-15);
  EXPECT_NEAR(std::abs(sobolev_inner(e1, e2, 1.3)), 0.0, 1e-15);
}

TEST(SobolevInner, GridMismatchRejected) {
  const SpectralField a(TorusGrid(1, 4));
  const SpectralField b(TorusGrid(1, 5));
  EXPECT_THROW(sobolev_inner(a, b, 0.0), PreconditionError);
}

TEST(SobolevInner, SelfInnerRealNonnegative) {
  const TorusGrid grid(1, 12);
  const SpectralField f = random_field(grid, 3);
  const auto v = sobolev_inner(f, f, 1.5);
  EXPECT_NEAR(v.imag(), 0.0, 1e-12 * std::abs(v));
  EXPECT_GE(v.real(), 0.0);
}

TEST(Bessel, ModeAction) {
  const TorusGrid grid(1, 3);
  const SpectralField e0 = basis_mode(grid, {0, 0});
  const SpectralField e1 = basis_mode(grid, {1, 0});
  EXPECT_NEAR(std::abs(apply_bessel(e0, 2.0).coeffs(grid.index_of({0, 0})) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(apply_bessel(e1, 2.0).coeffs(grid.index_of({1, 0})) - 2.0), 0.0, 1e-15);
}

TEST(Bessel, Isometry) {
  const TorusGrid grid(1, 16);
  const SpectralField f = random_field(grid, 7);
  for (double a : {-1.0, 0.5, 2.0})
    for (double s : {-1.0, 0.0, 1.0})
      EXPECT_NEAR(sobolev_norm(apply_bessel(f, a), s - a), sobolev_norm(f, s),
                  1e-12 * sobolev_norm(f, s));
}

TEST(Bessel, InverseIsExact) {
  const TorusGrid grid(2, 5);
  const SpectralField f = random_field(grid, 11);
  const SpectralField round = apply_bessel(apply_bessel(f, 1.7), -1.7);
  EXPECT_EQ((round.coeffs - f.coeffs).lpNorm<Eigen::Infinity>(), 0.0);
}

TEST(SobolevWeight, InverseWeight) {
  const TorusGrid grid(1, 8);
  const SobolevWeight w(grid, 1.3), winv(grid, -1.3);
  EXPECT_NEAR((w.values.cwiseProduct(winv.values) - Eigen::VectorXd::Ones(grid.size()))
                  .lpNorm<Eigen::Infinity>(),
              0.0, 1e-15);
}

TEST(Derivative, ZeroOrderIsIdentity) {
  const TorusGrid grid(1, 6);
  const SpectralField f = random_field(grid, 5);
  EXPECT_EQ((apply_derivative(f, MultiIndex::zero(1)).coeffs - f.coeffs).norm(), 0.0);
}

TEST(Derivative, SecondOrderSymbol) {
  const TorusGrid grid(1, 5);
  for (int j = -5; j <= 5; ++j) {
    const SpectralField ej = basis_mode(grid, {j, 0});
    const SpectralField d2 = apply_derivative(ej, MultiIndex({2}));
    EXPECT_NEAR(std::abs(d2.coeffs(grid.index_of({j, 0})) - double(j) * j), 0.0, 1e-14);
  }
}

TEST(Derivative, FirstOrderFormConsistency) {
  const TorusGrid grid(1, 10);
  const SpectralField f = random_field(grid, 9);
  const SpectralField df = apply_derivative(f, MultiIndex({1}));
  double expected = 0.0;
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    expected += TorusGrid::abs2(grid.mode_at(i)) * std::norm(f.coeffs(i));
  EXPECT_NEAR(sobolev_inner(df, df, 0.0).real(), expected, 1e-12 * expected);
}

TEST(PointwiseProduct, ConstantIsUnit) {
  const TorusGrid grid(1, 8);
  SpectralField one(grid);
  one.coeffs(grid.index_of({0, 0})) = std::sqrt(kTwoPi);
  const SpectralField f = random_field(grid, 13);
  EXPECT_NEAR((pointwise_product(one, f).coeffs - f.coeffs).norm(), 0.0, 1e-13 * f.coeffs.norm());
}

TEST(PointwiseProduct, ExponentAddition) {
  const TorusGrid grid(1, 4);
  const SpectralField e1 = basis_mode(grid, {1, 0});
  const SpectralField prod = pointwise_product(e1, e1);
  EXPECT_NEAR(std::abs(prod.coeffs(grid.index_of({2, 0})) - std::pow(kTwoPi, -0.5)), 0.0, 1e-15);
  EXPECT_NEAR(prod.coeffs.norm(), std::pow(kTwoPi, -0.5), 1e-15);
}

// brute-force double sum for (phi f, g)_0, the oracle for the adjoint identity
std::complex<double> pairing_brute_force(const SpectralField& phi, const SpectralField& f,
                                         const SpectralField& g) {
  const double scale = std::pow(kTwoPi, -0.5 * f.grid.dim());
  std::complex<double> acc = 0.0;
  for (Eigen::Index i = 0; i < g.grid.size(); ++i) {
    const Mode mi = g.grid.mode_at(i);
    for (Eigen::Index j = 0; j < f.grid.size(); ++j) {
      const Mode mj = f.grid.mode_at(j);
      acc += scale * phi.at({mi[0] - mj[0], mi[1] - mj[1]}) * f.coeffs(j) *
             std::conj(g.coeffs(i));
    }
  }
  return acc;
}

TEST(PointwiseProduct, AdjointIdentityWithWideBandPhi) {
  const int N = 8;
  const TorusGrid grid(1, N);
  const TorusGrid wide(1, 2 * N);
  const SpectralField phi = random_field(wide, 21);
  const SpectralField f = random_field(grid, 22);
  const SpectralField g = random_field(grid, 23);

  const auto lhs = sobolev_inner(pointwise_product(phi, f), g, 0.0);
  SpectralField phi_conj(wide);
  for (Eigen::Index i = 0; i < wide.size(); ++i) {
    const Mode m = wide.mode_at(i);
    phi_conj.coeffs(i) = std::conj(phi.coeffs(wide.index_of({-m[0], -m[1]})));
  }
  const auto rhs = sobolev_inner(f, pointwise_product(phi_conj, g), 0.0);
  EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-12 * std::abs(lhs));

  const auto oracle = pairing_brute_force(phi, f, g);
  EXPECT_NEAR(std::abs(lhs - oracle), 0.0, 1e-12 * std::abs(oracle));
}

TEST(PointwiseProduct, BilinearInBothFactors) {
  const TorusGrid grid(1, 6);
  const SpectralField a = random_field(grid, 31), b = random_field(grid, 32),
                      f = random_field(grid, 33);
  SpectralField sum(grid);
  sum.coeffs = 0.5 * a.coeffs + 2.0 * b.coeffs;
  const Eigen::VectorXcd lhs = pointwise_product(sum, f).coeffs;
  const Eigen::VectorXcd rhs =
      0.5 * pointwise_product(a, f).coeffs + 2.0 * pointwise_product(b, f).coeffs;
  EXPECT_NEAR((lhs - rhs).norm(), 0.0, 1e-13 * rhs.norm());
}

TEST(Quadrature, ParsevalOnFineGrid) {
  for (int n : {1, 2}) {
    const TorusGrid grid(n, n == 1 ? 16 : 6);
    const SpectralField f = random_field(grid, 41);
    const int P = 4 * grid.bandlimit() + 1;
    const Eigen::VectorXcd vals = evaluate_on_grid(f, P);
    const double cell = std::pow(kTwoPi / P, n);
    double l2sq = 0.0;
    for (Eigen::Index i = 0; i < vals.size(); ++i) l2sq += std::norm(vals(i)) * cell;
    const double exact = sobolev_norm(f, 0.0);
    EXPECT_NEAR(std::sqrt(l2sq), exact, 1e-10 * exact);
  }
}

TEST(Quadrature, ProductMatchesPhysicalSpaceForHalfBandFactors) {
  const int N = 16;
  const TorusGrid grid(1, N), half(1, N / 2);
  const SpectralField a_half = random_field(half, 51), b_half = random_field(half, 52);
  SpectralField a(grid), b(grid);
  for (Eigen::Index i = 0; i < half.size(); ++i) {
    const Mode m = half.mode_at(i);
    a.coeffs(grid.index_of(m)) = a_half.coeffs(i);
    b.coeffs(grid.index_of(m)) = b_half.coeffs(i);
  }
  const SpectralField spectral = pointwise_product(a, b);
  const SpectralField physical = project_to_band(
      grid,
      [&](const std::array<double, 2>& x) { return a.evaluate(x) * b.evaluate(x); },
      4 * N + 1);
  EXPECT_NEAR((spectral.coeffs - physical.coeffs).norm(), 0.0, 1e-10 * physical.coeffs.norm());
}

TEST(Norms, InterpolationBetweenExponents) {
  const TorusGrid grid(1, 20);
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
    const SpectralField f = random_field(grid, seed);
    for (auto [s1, s2] : std::vector<std::pair<double, double>>{{0.0, 2.0}, {-1.0, 1.0}, {0.5, 3.5}}) {
      const double mid = sobolev_norm(f, 0.5 * (s1 + s2));
      const double bound = std::sqrt(sobolev_norm(f, s1) * sobolev_norm(f, s2));
      EXPECT_LE(mid, bound * (1.0 + 1e-12));
    }
  }
}

TEST(Serialization, JsonRoundTrip) {
  const TorusGrid grid(2, 3);
  const SpectralField f = random_field(grid, 61);
  const SpectralField back = field_from_json(field_to_json(f));
  EXPECT_EQ(back.grid.dim(), 2);
  EXPECT_EQ(back.grid.bandlimit(), 3);
  EXPECT_EQ((back.coeffs - f.coeffs).norm(), 0.0);
}

TEST(Serialization, LexicographicModeOrder) {
  const TorusGrid grid(1, 1);
  SpectralField f(grid);
  f.coeffs(0) = {1.0, 0.0};   // mode -1
  f.coeffs(2) = {0.0, 2.0};   // mode +1
  const auto j = field_to_json(f);
  EXPECT_EQ(j.at("coeffs").at(0).at(0).get<double>(), 1.0);
  EXPECT_EQ(j.at("coeffs").at(2).at(1).get<double>(), 2.0);
}

TEST(TorusGrid, ModeIndexingRoundTrip) {
  for (int n : {1, 2}) {
    const TorusGrid grid(n, 5);
    for (Eigen::Index i = 0; i < grid.size(); ++i)
      EXPECT_EQ(grid.index_of(grid.mode_at(i)), i);
  }
  EXPECT_THROW(TorusGrid(3, 4), PreconditionError);
  EXPECT_THROW(TorusGrid(1, 0), PreconditionError);
}

}  // namespace
}  // namespace formsum
