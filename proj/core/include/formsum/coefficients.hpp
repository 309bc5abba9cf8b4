// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "formsum/spectral_field.hpp"

#include <nlohmann/json.hpp>

namespace formsum {

// --- coefficient catalog -----------------------------------------------------

struct DeltaSpec {
  std::vector<double> x0;
  std::complex<double> scale{1.0, 0.0};
};

struct DeltaDerivativeSpec {
  std::vector<double> x0;
  MultiIndex order;
  std::complex<double> scale{1.0, 0.0};
};

struct FourierTableSpec {
  SpectralField field;
};

// Smooth coefficient defined by samples; the callable is projected onto the
// band by exact quadrature. `desc` carries the serializable description for
// the named catalog ("constant", "sinusoid"); free-form callables are allowed
// in-process but refuse to serialize.
struct SmoothSpec {
  std::function<std::complex<double>(const std::array<double, 2>&)> fn;
  nlohmann::json desc;
};

class CoefficientSpec;

// phi(x) psi(y) with phi a 1D coefficient and psi a bounded 1D factor.
struct TensorProductSpec {
  std::shared_ptr<CoefficientSpec> phi;
  std::shared_ptr<CoefficientSpec> psi;
  double psi_sup_bound = 0.0;
};

class CoefficientSpec {
 public:
  using Variant =
      std::variant<DeltaSpec, DeltaDerivativeSpec, FourierTableSpec, SmoothSpec, TensorProductSpec>;

  CoefficientSpec(Variant v, std::string label) : variant_(std::move(v)), label_(std::move(label)) {}

  static CoefficientSpec delta(std::vector<double> x0, std::complex<double> scale = {1.0, 0.0});
  static CoefficientSpec delta_derivative(std::vector<double> x0, MultiIndex order,
                                          std::complex<double> scale = {1.0, 0.0});
  static CoefficientSpec fourier_table(SpectralField field, std::string label = "fourier_table");
  static CoefficientSpec constant(std::complex<double> value);
  // offset + amplitude * sin(frequency * x_axis + phase)
  static CoefficientSpec sinusoid(int axis, double frequency, double amplitude, double phase = 0.0,
                                  double offset = 0.0);
  static CoefficientSpec smooth(std::function<std::complex<double>(const std::array<double, 2>&)> fn,
                                std::string label = "custom");

  const Variant& variant() const { return variant_; }
  const std::string& label() const { return label_; }

  // number of torus variables the spec describes
  int dim() const;
  bool is_singular() const;  // delta or delta-derivative anywhere inside

 private:
  Variant variant_;
  std::string label_;
};

// Smooth approximant family: mode-wise damping factors in [0,1].
//  - fejer(M): plateau window, 1 on |t|<=M, linear decay to 0 at |t|=2M
//    (per axis); M >= bandlimit reproduces the field exactly.
//  - gaussian(h): exp(-h^2 |j|^2); h -> 0 reproduces the field.
struct MollifierSpec {
  enum class Kind { fejer, gaussian };
  Kind kind = Kind::gaussian;
  double parameter = 1.0;

  static MollifierSpec fejer(double cutoff) { return {Kind::fejer, cutoff}; }
  static MollifierSpec gaussian(double width) { return {Kind::gaussian, width}; }

  double damping(const Mode& m) const;
};

struct LpNormRequest {
  double gamma = 0.0;
  double p = 2.0;
  int quadrature_size = 0;  // 0: use 4N+1 per axis
};

struct LpNormResult {
  double value = 0.0;
  double quadrature_error = 0.0;  // |value - refined value|, refinement at ~2x points
};

// Band-limited Fourier realization of a coefficient on `grid`.
SpectralField realize(const CoefficientSpec& spec, const TorusGrid& grid);

// realize + mode-wise damping; the result is the realization of a smooth
// (trigonometric-polynomial) approximant.
SpectralField mollify(const CoefficientSpec& spec, const MollifierSpec& m, const TorusGrid& grid);

// || (-Delta+1)^{gamma/2} f ||_{L_p} by Bessel shift and uniform-grid
// quadrature; p in (1, inf). For p = 2 this agrees with sobolev_norm(f,gamma).
LpNormResult lp_sobolev_norm(const SpectralField& field, const LpNormRequest& req);

// Outer product phi(x) psi(y); only 1D x 1D factors are supported. psi_sup
// records the L_inf bound used in the tensor estimate (measured on a uniform
// grid when not supplied).
CoefficientSpec tensorize(const CoefficientSpec& phi, const CoefficientSpec& psi,
                          double psi_sup_bound = -1.0);

nlohmann::json coefficient_to_json(const CoefficientSpec& spec);
CoefficientSpec coefficient_from_json(const nlohmann::json& j);

nlohmann::json mollifier_to_json(const MollifierSpec& m);
MollifierSpec mollifier_from_json(const nlohmann::json& j);

}  // namespace formsum
