// SPDX-License-Identifier: Apache-2.0
#include "formsum/scenario.hpp"

namespace formsum {

namespace {

nlohmann::json delta_coef(std::complex<double> scale = {1.0, 0.0}) {
  return {{"variant", "delta"}, {"x0", {0.0}}, {"scale", {scale.real(), scale.imag()}}};
}

nlohmann::json constant_coef(double value) {
  return {{"variant", "smooth_samples"}, {"name", "constant"}, {"value", {value, 0.0}}};
}

nlohmann::json laplace_principal() {
  return nlohmann::json::array(
      {{{"alpha", {1}}, {"beta", {1}}, {"coef", constant_coef(1.0)}}});
}

nlohmann::json gaussian_schedule(const std::vector<double>& widths) {
  nlohmann::json arr = nlohmann::json::array();
  for (double h : widths) arr.push_back({{"kind", "gaussian"}, {"parameter", h}});
  return arr;
}

std::vector<Scenario> build_presets() {
  std::vector<Scenario> out;

  {
    Scenario s;
    s.kind = ScenarioKind::garding;
    s.label = "garding-constant";
    s.grid = TorusGrid(1, 128);
    s.claim_id = "coercivity.garding";
    s.claim = "the constant-coefficient principal form dominates the derivative Gram with delta = 1";
    s.params = {{"m", 1},
                {"rho0", 1.0},
                {"principal", laplace_principal()},
                {"delta_range", {1.0 - 1e-12, 1.0 + 1e-12}}};
    out.push_back(std::move(s));
  }
  {
    Scenario s;
    s.kind = ScenarioKind::multiplier_table;
    s.label = "delta-multiplier-table";
    s.grid = TorusGrid(1, 128);
    s.claim_id = "multipliers.rank_one_norm";
    s.claim =
        "the point-mass multiplier norm equals its rank-one closed form and is symmetric in the "
        "slot exponents";
    s.params = {{"coefficients", {delta_coef()}},
                {"slots", {{1.0, 1.0}, {2.0, 0.0}, {2.0, 1.0}}},
                {"check_symmetry", true},
                {"interpolation", {{2.0, 0.0, 1.0, 1.0}}},
                {"curves", true}};
    out.push_back(std::move(s));
  }
  {
    Scenario s;
    s.kind = ScenarioKind::embedding_sweep;
    s.label = "embedding-h2";
    s.grid = TorusGrid(1, 64);
    s.seed = 0x5EED;
    s.claim_id = "multipliers.h2_embedding";
    s.claim =
        "negative-order Sobolev tables act as multipliers with an N-stable norm ratio when "
        "k exceeds n/2";
    s.params = {{"lemma", "H2"}, {"k", 1.0}, {"l", 1.0},
                {"bandlimits", {16, 32, 64}},
                {"samples", {{"white_noise_count", 20}, {"band", 16}}},
                {"stability_tol", 0.10}};
    out.push_back(std::move(s));
  }
  {
    Scenario s;
    s.kind = ScenarioKind::embedding_sweep;
    s.label = "embedding-hp";
    s.grid = TorusGrid(1, 64);
    s.seed = 0x5EED;
    s.claim_id = "multipliers.lp_embedding";
    s.claim = "Bessel-Lp tables act as multipliers when p clears n/(k+l-gamma)";
    s.params = {{"lemma", "Hp"}, {"k", 0.5}, {"l", 1.0}, {"gamma", 0.0}, {"p", 4.0},
                {"bandlimits", {16, 32, 64}},
                {"samples", {{"white_noise_count", 12}, {"band", 16}}},
                {"stability_tol", 0.10}};
    out.push_back(std::move(s));
  }
  {
    Scenario s;
    s.kind = ScenarioKind::embedding_sweep;
    s.label = "polking-boundary";
    s.grid = TorusGrid(1, 32);
    s.seed = 0x5EED;
    s.claim_id = "multipliers.lp_embedding_boundary";
    s.claim = "the Lp embedding extends to the critical exponent when k < n/2";
    s.params = {{"lemma", "Polking"}, {"k", 0.4}, {"l", 0.5}, {"gamma", 0.2},
                {"p", 1.0 / 0.7},
                {"bandlimits", {16, 32}},
                {"samples", {{"white_noise_count", 12}, {"band", 16}}},
                {"stability_tol", 0.15}};
    out.push_back(std::move(s));
  }
  {
    Scenario s;
    s.kind = ScenarioKind::multiplier_table;
    s.label = "interpolation-chain";
    s.grid = TorusGrid(1, 32);
    s.seed = 0xC0FFEE;
    s.claim_id = "multipliers.interpolation";
    s.claim =
        "multiplier norms are symmetric under slot exchange and do not grow toward the balanced "
        "slot along equal-sum chains";
    s.params = {{"random_samples", {{"count", 20}, {"band", 64}}},
                {"slots", {{2.0, 0.0}, {1.0, 1.0}}},
                {"check_symmetry", true},
                {"interpolation", {{2.0, 0.0, 1.0, 1.0}, {1.5, 0.5, 1.0, 1.0}}},
                {"curves", false}};
    out.push_back(std::move(s));
  }
  {
    Scenario s;
    s.kind = ScenarioKind::multiplier_table;
    s.label = "fubini-tensor";
    s.grid = TorusGrid(2, 16);
    s.claim_id = "multipliers.tensor_bound";
    s.claim =
        "a 1D multiplier times a bounded factor of the other variable is a 2D multiplier with "
        "norm at most the product";
    s.params = {{"coefficients", nlohmann::json::array()},
                {"slots", {{1.0, 1.0}}},
                {"check_symmetry", false},
                {"curves", false},
                {"tensor_check",
                 {{"phi", delta_coef()},
                  {"psi", {{"variant", "smooth_samples"}, {"name", "sinusoid"}, {"axis", 0},
                           {"frequency", 1.0}, {"amplitude", 1.0}}},
                  {"k", 1.0}, {"l", 1.0}, {"psi_sup", 1.0}, {"factor_tol", 0.05}}}};
    out.push_back(std::move(s));
  }
  {
    Scenario s;
    s.kind = ScenarioKind::relative_bound;
    s.label = "relative-bound-delta";
    s.grid = TorusGrid(1, 64);
    s.claim_id = "formsum.relative_bound";
    s.claim =
        "the point-mass form is bounded by eps times the H^m form plus M(eps) times the L2 form, "
        "with M growing as eps shrinks";
    s.params = {{"m", 1},
                {"rho0", 1.0},
                {"lower", {{{"alpha", {0}}, {"beta", {0}}, {"coef", delta_coef()}}}},
                {"principal", laplace_principal()},
                {"eps", {0.5, 0.25, 0.1}}};
    out.push_back(std::move(s));
  }
  {
    Scenario s;
    s.kind = ScenarioKind::resolvent_identity;
    s.label = "resolvent-identity";
    s.grid = TorusGrid(1, 64);
    s.seed = 0xFAC70;
    s.claim_id = "formsum.resolvent_factorization";
    s.claim =
        "the second-resolvent difference of two generalized sums factors exactly through the "
        "weighted inverses";
    s.params = {{"random_cases", 5}};
    out.push_back(std::move(s));
  }
  {
    Scenario s;
    s.kind = ScenarioKind::convergence_study;
    s.label = "delta-well";
    s.grid = TorusGrid(1, 256);
    s.claim_id = "spectra.upper_convergence";
    s.claim =
        "mollified attractive point-well operators converge in the uniform resolvent sense with "
        "spectra approaching the limit spectrum from above";
    s.params = {{"m", 1},
                {"rho0", 1.0},
                {"principal", laplace_principal()},
                {"lower", {{{"alpha", {0}}, {"beta", {0}}, {"coef", delta_coef({-2.0, 0.0})}}}},
                {"schedule", gaussian_schedule({1.0, 0.5, 0.25, 0.125, 0.0625})},
                {"eps_target", 0.5}};
    out.push_back(std::move(s));
  }
  {
    Scenario s;
    s.kind = ScenarioKind::symmetric_compact;
    s.label = "delta-well-deep";
    s.grid = TorusGrid(1, 256);
    s.claim_id = "spectra.two_sided_convergence";
    s.claim =
        "for the Hermitian well with a compact perturbation the spectra converge from above and "
        "below once the mollifier resolves the well";
    s.params = {{"m", 1},
                {"rho0", 1.0},
                {"principal", laplace_principal()},
                {"lower", {{{"alpha", {0}}, {"beta", {0}}, {"coef", delta_coef({-2.0, 0.0})}}}},
                {"schedule",
                 gaussian_schedule({0.0625, 1.0 / 64, 1.0 / 256, 1.0 / 1024, 1.0 / 4096})},
                {"eps_target", 0.5},
                {"semidist_tol", 1e-3},
                {"assert_upper", true},
                {"upper_tol", 1e-3}};
    out.push_back(std::move(s));
  }
  {
    Scenario s;
    s.kind = ScenarioKind::convergence_study;
    s.label = "nonsymmetric-drift";
    s.grid = TorusGrid(1, 128);
    s.claim_id = "spectra.upper_convergence_nonsymmetric";
    s.claim =
        "the singular imaginary drift family still shows one-sided spectral convergence along a "
        "deep mollifier schedule";
    s.params = {{"m", 1},
                {"rho0", 1.0},
                {"principal", laplace_principal()},
                {"lower",
                 {{{"alpha", {1}}, {"beta", {0}}, {"coef", delta_coef({0.0, 1.0})}}}},
                {"schedule",
                 gaussian_schedule({0.25, 1.0 / 16, 1.0 / 64, 1.0 / 256, 1.0 / 1024, 1.0 / 4096,
                                    1.0 / 16384, 1.0 / 65536})},
                {"eps_target", 0.5},
                {"assert_upper", true},
                {"upper_tol", 1e-3}};
    out.push_back(std::move(s));
  }
  {
    Scenario s;
    s.kind = ScenarioKind::formsum_build;
    s.label = "sin-well-build";
    s.grid = TorusGrid(1, 128);
    s.claim_id = "formsum.m_sectorial";
    s.claim =
        "a variable principal part with a singular attractive well assembles into an m-sectorial "
        "generalized sum";
    s.params = {{"m", 1},
                {"rho0", 1.0},
                {"principal",
                 nlohmann::json::array(
                     {{{"alpha", {1}},
                       {"beta", {1}},
                       {"coef", {{"variant", "smooth_samples"}, {"name", "sinusoid"}, {"axis", 0},
                                 {"frequency", 1.0}, {"amplitude", 0.5}, {"offset", 1.0}}}}})},
                {"lower", {{{"alpha", {0}}, {"beta", {0}}, {"coef", delta_coef({-2.0, 0.0})}}}},
                {"eps_target", 0.5},
                {"export_matrices", false}};
    out.push_back(std::move(s));
  }

  return out;
}

}  // namespace

const std::vector<Scenario>& presets() {
  static const std::vector<Scenario> list = build_presets();
  return list;
}

std::optional<Scenario> find_preset(const std::string& name) {
  for (const auto& s : presets())
    if (s.label == name) return s;
  return std::nullopt;
}

}  // namespace formsum
