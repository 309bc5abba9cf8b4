// SPDX-License-Identifier: Apache-2.0
#include "formsum/spectral_field.hpp"

#include <nlohmann/json.hpp>

namespace formsum {

namespace {

// Per-axis evaluation matrix E[m, j] = exp(i j x_m) at x_m = 2pi m / points.
Eigen::MatrixXcd axis_phase_matrix(int bandlimit, int points) {
  Eigen::MatrixXcd e(points, 2 * bandlimit + 1);
  for (int m = 0; m < points; ++m) {
    const double x = kTwoPi * m / points;
    for (int j = -bandlimit; j <= bandlimit; ++j)
      e(m, j + bandlimit) = std::exp(std::complex<double>(0.0, j * x));
  }
  return e;
}

}  // namespace

std::complex<double> SpectralField::evaluate(const std::array<double, 2>& x) const {
  const double scale = std::pow(kTwoPi, -0.5 * grid.dim());
  std::complex<double> acc{0.0, 0.0};
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    const Mode m = grid.mode_at(i);
    const double phase = m[0] * x[0] + (grid.dim() == 2 ? m[1] * x[1] : 0.0);
    acc += coeffs(i) * std::exp(std::complex<double>(0.0, phase));
  }
  return scale * acc;
}

std::complex<double> sobolev_inner(const SpectralField& f, const SpectralField& g, double s) {
  require_same_grid(f.grid, g.grid, "sobolev_inner");
  std::complex<double> acc{0.0, 0.0};
  for (Eigen::Index i = 0; i < f.coeffs.size(); ++i) {
    const double w = std::pow(1.0 + TorusGrid::abs2(f.grid.mode_at(i)), s);
    acc += w * f.coeffs(i) * std::conj(g.coeffs(i));
  }
  return acc;
}

double sobolev_norm(const SpectralField& f, double s) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < f.coeffs.size(); ++i) {
    const double w = std::pow(1.0 + TorusGrid::abs2(f.grid.mode_at(i)), s);
    acc += w * std::norm(f.coeffs(i));
  }
  return std::sqrt(acc);
}

SpectralField apply_bessel(const SpectralField& f, double a) {
  SpectralField out = f;
  for (Eigen::Index i = 0; i < out.coeffs.size(); ++i)
    out.coeffs(i) *= std::pow(1.0 + TorusGrid::abs2(f.grid.mode_at(i)), a / 2.0);
  return out;
}

SpectralField apply_derivative(const SpectralField& f, const MultiIndex& alpha) {
  if (alpha.dim() != f.grid.dim())
    throw PreconditionError("apply_derivative: multi-index dimension mismatch");
  SpectralField out = f;
  for (Eigen::Index i = 0; i < out.coeffs.size(); ++i)
    out.coeffs(i) *= derivative_symbol(f.grid.mode_at(i), alpha);
  return out;
}

SpectralField pointwise_product(const SpectralField& phi, const SpectralField& f) {
  require_same_dim(phi.grid, f.grid, "pointwise_product");
  const double scale = std::pow(kTwoPi, -0.5 * f.grid.dim());
  SpectralField out(f.grid);
  for (Eigen::Index i = 0; i < out.coeffs.size(); ++i) {
    const Mode mi = f.grid.mode_at(i);
    std::complex<double> acc{0.0, 0.0};
    for (Eigen::Index j = 0; j < f.coeffs.size(); ++j) {
      const Mode mj = f.grid.mode_at(j);
      acc += phi.at({mi[0] - mj[0], mi[1] - mj[1]}) * f.coeffs(j);
    }
    out.coeffs(i) = scale * acc;
  }
  return out;
}

Eigen::VectorXcd evaluate_on_grid(const SpectralField& f, int points_per_axis) {
  const int n = f.grid.dim();
  const int N = f.grid.bandlimit();
  const double scale = std::pow(kTwoPi, -0.5 * n);
  const Eigen::MatrixXcd e = axis_phase_matrix(N, points_per_axis);
  if (n == 1) return scale * (e * f.coeffs);
  // reshape coeffs to (2N+1)x(2N+1), row index = first axis
  Eigen::MatrixXcd c = Eigen::Map<const Eigen::Matrix<std::complex<double>, Eigen::Dynamic,
                                                      Eigen::Dynamic, Eigen::RowMajor>>(
      f.coeffs.data(), f.grid.axis_size(), f.grid.axis_size());
  Eigen::MatrixXcd vals = e * c * e.transpose();  // vals(m1, m2)
  Eigen::VectorXcd out(static_cast<Eigen::Index>(points_per_axis) * points_per_axis);
  for (int a = 0; a < points_per_axis; ++a)
    for (int b = 0; b < points_per_axis; ++b)
      out(static_cast<Eigen::Index>(a) * points_per_axis + b) = scale * vals(a, b);
  return out;
}

SpectralField project_to_band(
    const TorusGrid& grid,
    const std::function<std::complex<double>(const std::array<double, 2>&)>& fn,
    int points_per_axis) {
  const int n = grid.dim();
  const int N = grid.bandlimit();
  const int P = points_per_axis;
  if (P < 2 * N + 1) throw PreconditionError("project_to_band: quadrature grid too coarse");
  const double cell = std::pow(kTwoPi / P, n);
  const double scale = std::pow(kTwoPi, -0.5 * n);
  SpectralField out(grid);
  if (n == 1) {
    Eigen::VectorXcd samples(P);
    for (int m = 0; m < P; ++m) samples(m) = fn({kTwoPi * m / P, 0.0});
    const Eigen::MatrixXcd e = axis_phase_matrix(N, P);
    // c_j = integral f conj(e_j) = (2pi)^{-1/2} sum_m f(x_m) exp(-i j x_m) cell
    out.coeffs = scale * cell * (e.adjoint() * samples);
    return out;
  }
  Eigen::MatrixXcd samples(P, P);
  for (int a = 0; a < P; ++a)
    for (int b = 0; b < P; ++b) samples(a, b) = fn({kTwoPi * a / P, kTwoPi * b / P});
  const Eigen::MatrixXcd e = axis_phase_matrix(N, P);
  Eigen::MatrixXcd c = scale * cell * (e.adjoint() * samples * e.conjugate());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const Mode mm = grid.mode_at(i);
    out.coeffs(i) = c(mm[0] + N, mm[1] + N);
  }
  return out;
}

nlohmann::json field_to_json(const SpectralField& f) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (Eigen::Index i = 0; i < f.coeffs.size(); ++i)
    coeffs.push_back({f.coeffs(i).real(), f.coeffs(i).imag()});
  return {{"n", f.grid.dim()}, {"N", f.grid.bandlimit()}, {"coeffs", std::move(coeffs)}};
}

SpectralField field_from_json(const nlohmann::json& j) {
  if (!j.contains("n") || !j.contains("N") || !j.contains("coeffs"))
    throw ConfigError("SpectralField JSON needs fields n, N, coeffs");
  TorusGrid grid(j.at("n").get<int>(), j.at("N").get<int>());
  const auto& cj = j.at("coeffs");
  if (static_cast<Eigen::Index>(cj.size()) != grid.size())
    throw ConfigError("SpectralField JSON: coefficient count does not match (2N+1)^n");
  SpectralField f(grid);
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    f.coeffs(i) = {cj.at(i).at(0).get<double>(), cj.at(i).at(1).get<double>()};
  return f;
}

}  // namespace formsum
