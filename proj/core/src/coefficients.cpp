// SPDX-License-Identifier: Apache-2.0
#include "formsum/coefficients.hpp"

#include <algorithm>

namespace formsum {

CoefficientSpec CoefficientSpec::delta(std::vector<double> x0, std::complex<double> scale) {
  return CoefficientSpec(DeltaSpec{std::move(x0), scale}, "delta");
}

CoefficientSpec CoefficientSpec::delta_derivative(std::vector<double> x0, MultiIndex order,
                                                  std::complex<double> scale) {
  if (static_cast<int>(x0.size()) != order.dim())
    throw PreconditionError("delta_derivative: x0 and order dimensions differ");
  return CoefficientSpec(DeltaDerivativeSpec{std::move(x0), std::move(order), scale},
                         "delta_derivative");
}

CoefficientSpec CoefficientSpec::fourier_table(SpectralField field, std::string label) {
  return CoefficientSpec(FourierTableSpec{std::move(field)}, std::move(label));
}

CoefficientSpec CoefficientSpec::constant(std::complex<double> value) {
  SmoothSpec s;
  s.fn = [value](const std::array<double, 2>&) { return value; };
  s.desc = {{"name", "constant"}, {"value", {value.real(), value.imag()}}};
  return CoefficientSpec(std::move(s), "constant");
}

CoefficientSpec CoefficientSpec::sinusoid(int axis, double frequency, double amplitude, double phase,
                                          double offset) {
  SmoothSpec s;
  s.fn = [=](const std::array<double, 2>& x) {
    return std::complex<double>(offset + amplitude * std::sin(frequency * x[axis] + phase), 0.0);
  };
  s.desc = {{"name", "sinusoid"}, {"axis", axis},      {"frequency", frequency},
            {"amplitude", amplitude}, {"phase", phase}, {"offset", offset}};
  return CoefficientSpec(std::move(s), "sinusoid");
}

CoefficientSpec CoefficientSpec::smooth(
    std::function<std::complex<double>(const std::array<double, 2>&)> fn, std::string label) {
  SmoothSpec s;
  s.fn = std::move(fn);
  s.desc = {{"name", "custom"}};
  return CoefficientSpec(std::move(s), std::move(label));
}

int CoefficientSpec::dim() const {
  return std::visit(
      [](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, DeltaSpec>) return static_cast<int>(v.x0.size());
        else if constexpr (std::is_same_v<T, DeltaDerivativeSpec>) return static_cast<int>(v.x0.size());
        else if constexpr (std::is_same_v<T, FourierTableSpec>) return v.field.grid.dim();
        else if constexpr (std::is_same_v<T, SmoothSpec>) return 0;  // any
        else return 2;  // tensor product of two 1D factors
      },
      variant_);
}

bool CoefficientSpec::is_singular() const {
  return std::visit(
      [](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, DeltaSpec> || std::is_same_v<T, DeltaDerivativeSpec>)
          return true;
        else if constexpr (std::is_same_v<T, TensorProductSpec>)
          return v.phi->is_singular() || v.psi->is_singular();
        else
          return false;
      },
      variant_);
}

double MollifierSpec::damping(const Mode& m) const {
  if (kind == Kind::gaussian) {
    return std::exp(-parameter * parameter * TorusGrid::abs2(m));
  }
  // plateau window per axis: 1 up to M, linear decay to zero at 2M
  const double M = parameter;
  if (M < 1.0) throw PreconditionError("fejer mollifier: cutoff must be >= 1");
  double d = 1.0;
  for (int axis = 0; axis < 2; ++axis) {
    const double t = std::abs(static_cast<double>(m[axis]));
    if (t <= M) continue;
    d *= std::max(0.0, (2.0 * M - t) / M);
  }
  return d;
}

namespace {

void require_dim(const CoefficientSpec& spec, const TorusGrid& grid, const char* where) {
  const int d = spec.dim();
  if (d != 0 && d != grid.dim())
    throw PreconditionError(std::string(where) + ": coefficient '" + spec.label() + "' has " +
                            std::to_string(d) + " variables, grid has " +
                            std::to_string(grid.dim()));
}

SpectralField realize_delta(const DeltaSpec& d, const TorusGrid& grid) {
  SpectralField out(grid);
  const double scale = std::pow(kTwoPi, -0.5 * grid.dim());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const Mode m = grid.mode_at(i);
    const double phase = -(m[0] * d.x0[0] + (grid.dim() == 2 ? m[1] * d.x0[1] : 0.0));
    out.coeffs(i) = d.scale * scale * std::exp(std::complex<double>(0.0, phase));
  }
  return out;
}

}  // namespace

SpectralField realize(const CoefficientSpec& spec, const TorusGrid& grid) {
  require_dim(spec, grid, "realize");
  return std::visit(
      [&](const auto& v) -> SpectralField {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, DeltaSpec>) {
          return realize_delta(v, grid);
        } else if constexpr (std::is_same_v<T, DeltaDerivativeSpec>) {
          SpectralField base = realize_delta(DeltaSpec{v.x0, v.scale}, grid);
          return apply_derivative(base, v.order);
        } else if constexpr (std::is_same_v<T, FourierTableSpec>) {
          SpectralField out(grid);
          for (Eigen::Index i = 0; i < grid.size(); ++i) out.coeffs(i) = v.field.at(grid.mode_at(i));
          return out;
        } else if constexpr (std::is_same_v<T, SmoothSpec>) {
          return project_to_band(grid, v.fn, 4 * grid.bandlimit() + 1);
        } else {
          if (grid.dim() != 2)
            throw PreconditionError("realize: tensor_product needs a 2D grid");
          const TorusGrid axis(1, grid.bandlimit());
          const SpectralField a = realize(*v.phi, axis);
          const SpectralField b = realize(*v.psi, axis);
          SpectralField out(grid);
          for (Eigen::Index i = 0; i < grid.size(); ++i) {
            const Mode m = grid.mode_at(i);
            out.coeffs(i) = a.coeffs(m[0] + grid.bandlimit()) * b.coeffs(m[1] + grid.bandlimit());
          }
          return out;
        }
      },
      spec.variant());
}

SpectralField mollify(const CoefficientSpec& spec, const MollifierSpec& m, const TorusGrid& grid) {
  SpectralField out = realize(spec, grid);
  for (Eigen::Index i = 0; i < grid.size(); ++i) out.coeffs(i) *= m.damping(grid.mode_at(i));
  return out;
}

LpNormResult lp_sobolev_norm(const SpectralField& field, const LpNormRequest& req) {
  if (!(req.p > 1.0) || !std::isfinite(req.p))
    throw PreconditionError("lp_sobolev_norm: p must lie in (1, inf)");
  const int N = field.grid.bandlimit();
  const int n = field.grid.dim();
  int P = req.quadrature_size > 0 ? req.quadrature_size : 4 * N + 1;
  if (P < 4 * N + 1)
    throw PreconditionError("lp_sobolev_norm: quadrature size must be >= 4N+1");
  const SpectralField shifted = apply_bessel(field, req.gamma);

  auto quad = [&](int points) {
    const Eigen::VectorXcd vals = evaluate_on_grid(shifted, points);
    const double cell = std::pow(kTwoPi / points, n);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < vals.size(); ++i) acc += std::pow(std::abs(vals(i)), req.p);
    return std::pow(acc * cell, 1.0 / req.p);
  };

  LpNormResult out;
  out.value = quad(P);
  out.quadrature_error = std::abs(out.value - quad(2 * P + 1));
  if (!std::isfinite(out.value))
    throw NumericError("lp_sobolev_norm: quadrature produced a non-finite value");
  return out;
}

CoefficientSpec tensorize(const CoefficientSpec& phi, const CoefficientSpec& psi,
                          double psi_sup_bound) {
  if (phi.dim() > 1 || psi.dim() > 1)
    throw PreconditionError("tensorize: only 1D x 1D factors are supported");
  double sup = psi_sup_bound;
  if (sup < 0.0) {
    const TorusGrid probe(1, 64);
    const Eigen::VectorXcd vals = evaluate_on_grid(realize(psi, probe), 4 * 64 + 1);
    sup = 0.0;
    for (Eigen::Index i = 0; i < vals.size(); ++i) sup = std::max(sup, std::abs(vals(i)));
  }
  TensorProductSpec t;
  t.phi = std::make_shared<CoefficientSpec>(phi);
  t.psi = std::make_shared<CoefficientSpec>(psi);
  t.psi_sup_bound = sup;
  return CoefficientSpec(std::move(t), phi.label() + "(x)*" + psi.label() + "(y)");
}

// --- JSON ---------------------------------------------------------------

namespace {
std::complex<double> complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}
}  // namespace

nlohmann::json coefficient_to_json(const CoefficientSpec& spec) {
  nlohmann::json j;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, DeltaSpec>) {
          j = {{"variant", "delta"}, {"x0", v.x0}, {"scale", {v.scale.real(), v.scale.imag()}}};
        } else if constexpr (std::is_same_v<T, DeltaDerivativeSpec>) {
          j = {{"variant", "delta_derivative"},
               {"x0", v.x0},
               {"order", v.order.entries()},
               {"scale", {v.scale.real(), v.scale.imag()}}};
        } else if constexpr (std::is_same_v<T, FourierTableSpec>) {
          j = {{"variant", "fourier_table"}, {"field", field_to_json(v.field)}};
        } else if constexpr (std::is_same_v<T, SmoothSpec>) {
          if (v.desc.value("name", "custom") == "custom")
            throw ConfigError("cannot serialize a free-form smooth coefficient");
          j = v.desc;
          j["variant"] = "smooth_samples";
        } else {
          j = {{"variant", "tensor_product"},
               {"phi", coefficient_to_json(*v.phi)},
               {"psi", coefficient_to_json(*v.psi)},
               {"psi_sup", v.psi_sup_bound}};
        }
      },
      spec.variant());
  j["label"] = spec.label();
  return j;
}

CoefficientSpec coefficient_from_json(const nlohmann::json& j) {
  if (!j.contains("variant")) throw ConfigError("coefficient JSON needs a 'variant' tag");
  const std::string variant = j.at("variant").get<std::string>();
  auto relabel = [&](CoefficientSpec spec) {
    if (j.contains("label"))
      return CoefficientSpec(spec.variant(), j.at("label").get<std::string>());
    return spec;
  };
  if (variant == "delta") {
    return relabel(CoefficientSpec::delta(j.at("x0").get<std::vector<double>>(),
                                          j.contains("scale") ? complex_from_json(j.at("scale"))
                                                              : std::complex<double>{1.0, 0.0}));
  }
  if (variant == "delta_derivative") {
    return relabel(CoefficientSpec::delta_derivative(
        j.at("x0").get<std::vector<double>>(), MultiIndex(j.at("order").get<std::vector<int>>()),
        j.contains("scale") ? complex_from_json(j.at("scale")) : std::complex<double>{1.0, 0.0}));
  }
  if (variant == "fourier_table") {
    return relabel(CoefficientSpec::fourier_table(field_from_json(j.at("field"))));
  }
  if (variant == "smooth_samples") {
    const std::string name = j.value("name", "");
    if (name == "constant") return relabel(CoefficientSpec::constant(complex_from_json(j.at("value"))));
    if (name == "sinusoid")
      return relabel(CoefficientSpec::sinusoid(j.value("axis", 0), j.at("frequency").get<double>(),
                                               j.at("amplitude").get<double>(), j.value("phase", 0.0),
                                               j.value("offset", 0.0)));
    throw ConfigError("unknown smooth_samples name '" + name + "'");
  }
  if (variant == "tensor_product") {
    CoefficientSpec phi = coefficient_from_json(j.at("phi"));
    CoefficientSpec psi = coefficient_from_json(j.at("psi"));
    return relabel(tensorize(phi, psi, j.value("psi_sup", -1.0)));
  }
  throw ConfigError("unknown coefficient variant '" + variant + "'");
}

nlohmann::json mollifier_to_json(const MollifierSpec& m) {
  return {{"kind", m.kind == MollifierSpec::Kind::fejer ? "fejer" : "gaussian"},
          {"parameter", m.parameter}};
}

MollifierSpec mollifier_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const double p = j.at("parameter").get<double>();
  if (kind == "fejer") return MollifierSpec::fejer(p);
  if (kind == "gaussian") return MollifierSpec::gaussian(p);
  throw ConfigError("unknown mollifier kind '" + kind + "'");
}

}  // namespace formsum
