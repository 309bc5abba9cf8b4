// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>

#include "formsum/torus.hpp"

#include <nlohmann/json_fwd.hpp>

namespace formsum {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// A trigonometric polynomial on the torus, stored as coefficients with
// respect to the orthonormal basis e_j, in lexicographic mode order.
struct SpectralField {
  TorusGrid grid;
  Eigen::VectorXcd coeffs;

  SpectralField(const TorusGrid& g, Eigen::VectorXcd c) : grid(g), coeffs(std::move(c)) {
    if (coeffs.size() != grid.size())
      throw PreconditionError("SpectralField: coefficient count does not match grid");
  }
  explicit SpectralField(const TorusGrid& g) : grid(g), coeffs(Eigen::VectorXcd::Zero(g.size())) {}

  std::complex<double> at(const Mode& m) const {
    return grid.contains(m) ? coeffs(grid.index_of(m)) : std::complex<double>{0.0, 0.0};
  }

  // Point evaluation sum_j c_j e_j(x).
  std::complex<double> evaluate(const std::array<double, 2>& x) const;
};

// Diagonal Sobolev weight w_j = (1+|j|^2)^{s/2}; the inverse weight is the
// weight of -s exactly.
struct SobolevWeight {
  double s;
  Eigen::VectorXd values;

  SobolevWeight(const TorusGrid& grid, double s_) : s(s_), values(grid.size()) {
    for (Eigen::Index i = 0; i < grid.size(); ++i)
      values(i) = std::pow(1.0 + TorusGrid::abs2(grid.mode_at(i)), s_ / 2.0);
  }
};

// (f,g)_s = sum_j (1+|j|^2)^s f_j conj(g_j). Grids must agree.
std::complex<double> sobolev_inner(const SpectralField& f, const SpectralField& g, double s);

double sobolev_norm(const SpectralField& f, double s);

// (-Delta+1)^{a/2}: multiplies coefficients by (1+|j|^2)^{a/2}.
SpectralField apply_bessel(const SpectralField& f, double a);

// D^alpha with D = i d/dx: coefficient at j scaled by prod(-j_i)^{alpha_i}.
SpectralField apply_derivative(const SpectralField& f, const MultiIndex& alpha);

// Galerkin product: (phi f)_i = (2pi)^{-n/2} sum_j phi_{i-j} f_j truncated to
// f's band. phi may live on a grid with a different bandlimit (out-of-band
// coefficients count as zero); dimensions must agree.
SpectralField pointwise_product(const SpectralField& phi, const SpectralField& f);

// Values on the uniform tensor grid x_m = 2pi m / points, m = 0..points-1 per
// axis; row-major in 2D. Direct separable evaluation, exact for the band.
Eigen::VectorXcd evaluate_on_grid(const SpectralField& f, int points_per_axis);

// L2 projection of sampled values (same grid layout as evaluate_on_grid) onto
// the band of `grid`; exact when the samples come from a polynomial of
// bandwidth <= points_per_axis - 1 - N.
SpectralField project_to_band(const TorusGrid& grid,
                              const std::function<std::complex<double>(const std::array<double, 2>&)>& fn,
                              int points_per_axis);

// JSON form {n, N, coeffs: [[re,im],...]} in lexicographic mode order.
nlohmann::json field_to_json(const SpectralField& f);
SpectralField field_from_json(const nlohmann::json& j);

}  // namespace formsum
