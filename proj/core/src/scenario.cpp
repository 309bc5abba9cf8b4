// SPDX-License-Identifier: Apache-2.0
#include "formsum/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include "formsum/report_io.hpp"
#include "formsum/version.hpp"

namespace formsum {

namespace {

struct Verdict {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct RunContext {
  const Scenario& scenario;
  std::filesystem::path dir;
  int threads = 1;
  std::vector<Verdict> verdicts;
  nlohmann::ordered_json results;  // kind-specific payload for verdicts.json
  std::vector<std::string> files;

  void verdict(const std::string& name, bool passed, const std::string& detail = "") {
    verdicts.push_back({name, passed, detail});
  }
  void write_csv(const std::string& filename, const CsvWriter& csv) {
    csv.write(dir / filename);
    files.push_back(filename);
  }
  void write_json(const std::string& filename, const nlohmann::ordered_json& j) {
    write_json_file(dir / filename, j);
    files.push_back(filename);
  }
};

// --- params parsing -------------------------------------------------------

const nlohmann::json& need(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  return j.at(key);
}

MultiIndex multi_index_from_json(const nlohmann::json& j) {
  try {
    return MultiIndex(j.get<std::vector<int>>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad multi-index: ") + e.what());
  }
}

OperatorSpec operator_spec_from_json(const nlohmann::json& j, int grid_dim) {
  OperatorSpec spec;
  spec.dim = grid_dim;
  spec.m = need(j, "m").get<int>();
  spec.rho0 = j.value("rho0", 1.0);
  auto parse_entries = [&](const char* key, std::vector<OperatorEntry>& out) {
    if (!j.contains(key)) return;
    for (const auto& e : j.at(key)) {
      out.push_back({multi_index_from_json(need(e, "alpha")), multi_index_from_json(need(e, "beta")),
                     coefficient_from_json(need(e, "coef"))});
    }
  };
  parse_entries("principal", spec.principal);
  parse_entries("lower", spec.lower);
  return spec;
}

nlohmann::ordered_json operator_spec_to_json(const OperatorSpec& spec) {
  nlohmann::ordered_json j;
  j["m"] = spec.m;
  j["rho0"] = spec.rho0;
  auto dump_entries = [&](const std::vector<OperatorEntry>& entries) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
      nlohmann::ordered_json je;
      je["alpha"] = e.alpha.entries();
      je["beta"] = e.beta.entries();
      je["coef"] = nlohmann::ordered_json(coefficient_to_json(e.coef));
      arr.push_back(je);
    }
    return arr;
  };
  j["principal"] = dump_entries(spec.principal);
  j["lower"] = dump_entries(spec.lower);
  return j;
}

SpectralWindow window_from_json(const nlohmann::json& j) {
  SpectralWindow w;
  if (j.contains("window")) {
    const auto& wj = j.at("window");
    w.re_min = wj.value("re_min", w.re_min);
    w.re_max = wj.value("re_max", w.re_max);
    w.im_abs = wj.value("im_abs", w.im_abs);
  }
  return w;
}

std::vector<MollifierSpec> schedule_from_json(const nlohmann::json& j) {
  std::vector<MollifierSpec> out;
  for (const auto& mj : need(j, "schedule")) out.push_back(mollifier_from_json(mj));
  if (out.empty()) throw ConfigError("empty mollifier schedule");
  return out;
}

std::vector<CoefficientSpec> sample_family_from_json(const nlohmann::json& params,
                                                     std::uint64_t seed) {
  std::vector<CoefficientSpec> samples;
  const auto& sj = params.contains("samples") ? params.at("samples") : nlohmann::json::object();
  const int count = sj.value("white_noise_count", 20);
  const int band = sj.value("band", 16);
  Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    const TorusGrid g(1, band);
    SpectralField f(g, rng.complex_gaussian_vector(g.size()));
    samples.push_back(
        CoefficientSpec::fourier_table(std::move(f), "white_noise_" + std::to_string(i)));
  }
  if (sj.value("include_delta", true)) samples.push_back(CoefficientSpec::delta({0.0}));
  if (sj.value("include_single_mode", true)) {
    const TorusGrid g(1, band);
    SpectralField f(g);
    f.coeffs(g.index_of({0, 0})) = 1.0;
    samples.push_back(CoefficientSpec::fourier_table(std::move(f), "single_mode"));
  }
  return samples;
}

// --- kind runners ---------------------------------------------------------

void run_garding(RunContext& ctx) {
  const auto& p = ctx.scenario.params;
  OperatorSpec spec = operator_spec_from_json(p, ctx.scenario.grid.dim());
  const Matrix t = assemble_principal(spec, ctx.scenario.grid, false);
  const CoercivityReport rep = verify_garding(t, spec, ctx.scenario.grid);

  ctx.results["delta"] = rep.delta;
  ctx.results["c1"] = rep.c1;
  ctx.results["c2"] = rep.c2;
  ctx.verdict("garding_positive", rep.delta > 0.0, "delta = " + format_number(rep.delta));
  if (p.contains("delta_range")) {
    const double lo = p.at("delta_range").at(0).get<double>();
    const double hi = p.at("delta_range").at(1).get<double>();
    ctx.verdict("delta_in_range", rep.delta >= lo && rep.delta <= hi,
                format_number(rep.delta) + " in [" + format_number(lo) + ", " + format_number(hi) + "]");
  }
  CsvWriter csv({"delta", "c1", "c2"});
  csv.add_row({format_number(rep.delta), format_number(rep.c1), format_number(rep.c2)});
  ctx.write_csv("report.csv", csv);
}

bool is_pure_delta(const CoefficientSpec& spec, std::complex<double>& scale_out) {
  if (const auto* d = std::get_if<DeltaSpec>(&spec.variant())) {
    scale_out = d->scale;
    return true;
  }
  return false;
}

double rank_one_delta_norm(const TorusGrid& grid, double k, double l, std::complex<double> scale) {
  double wk = 0.0, wl = 0.0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double a2 = TorusGrid::abs2(grid.mode_at(i));
    wk += std::pow(1.0 + a2, -k);
    wl += std::pow(1.0 + a2, -l);
  }
  return std::abs(scale) * std::pow(kTwoPi, -grid.dim()) * std::sqrt(wk) * std::sqrt(wl);
}

void run_multiplier_table(RunContext& ctx) {
  const auto& p = ctx.scenario.params;
  const TorusGrid& grid = ctx.scenario.grid;

  std::vector<CoefficientSpec> coefficients;
  if (p.contains("coefficients"))
    for (const auto& cj : p.at("coefficients")) coefficients.push_back(coefficient_from_json(cj));
  if (p.contains("random_samples")) {
    const auto& rj = p.at("random_samples");
    const int count = rj.value("count", 20);
    const int band = rj.value("band", 2 * grid.bandlimit());
    Rng rng(ctx.scenario.seed);
    for (int i = 0; i < count; ++i) {
      const TorusGrid g(grid.dim(), band);
      SpectralField f(g, rng.complex_gaussian_vector(g.size()));
      coefficients.push_back(
          CoefficientSpec::fourier_table(std::move(f), "white_noise_" + std::to_string(i)));
    }
  }

  std::vector<std::pair<double, double>> slots;
  for (const auto& sj : need(p, "slots")) slots.emplace_back(sj.at(0).get<double>(), sj.at(1).get<double>());
  const bool do_symmetry = p.value("check_symmetry", true);

  CsvWriter csv({"coefficient", "k", "l", "norm", "norm_swapped", "symmetry_gap"});
  CsvWriter curves_csv({"coefficient", "k", "l", "cutoff", "eps", "witness_M"});
  bool symmetry_ok = true;
  bool oracle_ok = true;
  bool any_oracle = false;

  std::vector<int> cutoffs;
  if (p.contains("cutoffs"))
    cutoffs = p.at("cutoffs").get<std::vector<int>>();
  else
    for (int lam : {0, grid.bandlimit() / 4, grid.bandlimit() / 2})
      if (cutoffs.empty() || lam > cutoffs.back()) cutoffs.push_back(lam);

  for (const auto& coef : coefficients) {
    const TorusGrid wide(grid.dim(), 2 * grid.bandlimit());
    const SpectralField table = realize(coef, wide);
    for (const auto& [k, l] : slots) {
      const double norm = multiplier_norm(assemble(table, k, l, grid));
      double swapped = norm;
      if (do_symmetry) {
        swapped = multiplier_norm(assemble(table, l, k, grid));
        symmetry_ok = symmetry_ok && std::abs(norm - swapped) <= 1e-9 * std::max(1.0, norm);
      }
      csv.add_row({coef.label(), format_number(k), format_number(l), format_number(norm),
                   format_number(swapped), format_number(std::abs(norm - swapped))});
      std::complex<double> scale;
      if (is_pure_delta(coef, scale)) {
        any_oracle = true;
        const double closed = rank_one_delta_norm(grid, k, l, scale);
        oracle_ok = oracle_ok && std::abs(norm - closed) <= 1e-10 * std::max(1.0, closed);
      }
      if (p.value("curves", true)) {
        const RelativeBoundCurve curve = relative_bound_curve(assemble(table, k, l, grid), cutoffs);
        for (std::size_t i = 0; i < curve.cutoffs.size(); ++i)
          curves_csv.add_row({coef.label(), format_number(k), format_number(l),
                              std::to_string(curve.cutoffs[i]), format_number(curve.eps[i]),
                              format_number(curve.witness_M[i])});
      }
    }
  }
  ctx.write_csv("report.csv", csv);
  if (p.value("curves", true)) ctx.write_csv("curves.csv", curves_csv);
  if (do_symmetry) ctx.verdict("norm_symmetry", symmetry_ok, "|n(k,l) - n(l,k)| <= 1e-9");
  if (any_oracle) ctx.verdict("rank_one_oracle", oracle_ok, "point-mass closed form to 1e-10");

  if (p.contains("interpolation")) {
    bool ok = true;
    Rng rng(ctx.scenario.seed + 1);
    for (const auto& chain : p.at("interpolation")) {
      const double k1 = chain.at(0).get<double>(), l1 = chain.at(1).get<double>();
      const double k2 = chain.at(2).get<double>(), l2 = chain.at(3).get<double>();
      for (const auto& coef : coefficients) {
        const TorusGrid wide(grid.dim(), 2 * grid.bandlimit());
        ok = ok && check_interpolation(realize(coef, wide), k1, l1, k2, l2, grid);
      }
    }
    ctx.verdict("interpolation_monotone", ok, "norm does not grow toward the balanced slot");
  }

  if (p.contains("tensor_check")) {
    if (grid.dim() != 2) throw PreconditionError("tensor_check requires a 2D grid");
    const auto& tj = p.at("tensor_check");
    const CoefficientSpec phi = coefficient_from_json(need(tj, "phi"));
    const CoefficientSpec psi = coefficient_from_json(need(tj, "psi"));
    const double k = tj.value("k", 1.0), l = tj.value("l", 1.0);
    const double tol = tj.value("factor_tol", 0.05);
    const CoefficientSpec tensor = tensorize(phi, psi, tj.value("psi_sup", -1.0));
    const double sup = std::get<TensorProductSpec>(tensor.variant()).psi_sup_bound;
    const double n2 = multiplier_norm(assemble(tensor, k, l, grid));
    const TorusGrid line(1, grid.bandlimit());
    const double n1 = multiplier_norm(assemble(phi, k, l, line));
    ctx.results["tensor"] = {{"norm_2d", n2}, {"norm_1d", n1}, {"psi_sup", sup},
                             {"bound", n1 * sup * (1.0 + tol)}};
    ctx.verdict("tensor_bound", n2 <= n1 * sup * (1.0 + tol),
                format_number(n2) + " <= " + format_number(n1 * sup * (1.0 + tol)));
    CsvWriter tcsv({"norm_2d", "norm_1d", "psi_sup", "bound"});
    tcsv.add_row({format_number(n2), format_number(n1), format_number(sup),
                  format_number(n1 * sup * (1.0 + tol))});
    ctx.write_csv("tensor.csv", tcsv);
  }
}

void run_embedding_sweep(RunContext& ctx) {
  const auto& p = ctx.scenario.params;
  EmbeddingParams params;
  const std::string lemma = need(p, "lemma").get<std::string>();
  if (lemma == "H2") params.lemma = EmbeddingLemma::H2;
  else if (lemma == "Hp") params.lemma = EmbeddingLemma::Hp;
  else if (lemma == "Polking") params.lemma = EmbeddingLemma::Polking;
  else throw ConfigError("unknown embedding lemma '" + lemma + "'");
  params.k = need(p, "k").get<double>();
  params.l = need(p, "l").get<double>();
  params.gamma = p.value("gamma", 0.0);
  params.p = p.value("p", 2.0);

  std::vector<int> bandlimits = p.contains("bandlimits")
                                    ? p.at("bandlimits").get<std::vector<int>>()
                                    : std::vector<int>{ctx.scenario.grid.bandlimit()};
  const std::vector<CoefficientSpec> samples = sample_family_from_json(p, ctx.scenario.seed);

  CsvWriter summary({"bandlimit", "max_ratio", "product_constant"});
  std::vector<double> max_ratios;
  for (int N : bandlimits) {
    const TorusGrid trial(ctx.scenario.grid.dim(), N);
    Rng rng(ctx.scenario.seed + static_cast<std::uint64_t>(N));
    const EmbeddingReport report = embedding_sweep(params, samples, trial, rng);
    max_ratios.push_back(report.max_ratio);
    summary.add_row({std::to_string(N), format_number(report.max_ratio),
                     format_number(report.product_constant)});
    CsvWriter per_sample({"sample_id", "source_norm", "mult_norm", "ratio"});
    for (const auto& row : report.rows)
      per_sample.add_row({row.sample_id, format_number(row.source_norm),
                          format_number(row.mult_norm), format_number(row.ratio)});
    ctx.write_csv("samples_N" + std::to_string(N) + ".csv", per_sample);
  }
  ctx.write_csv("report.csv", summary);

  const double lo = *std::min_element(max_ratios.begin(), max_ratios.end());
  const double hi = *std::max_element(max_ratios.begin(), max_ratios.end());
  const double variation = lo > 0.0 ? (hi - lo) / lo : 0.0;
  ctx.results["max_ratios"] = max_ratios;
  ctx.results["variation"] = variation;
  const double tol = p.value("stability_tol", 0.10);
  ctx.verdict("ratio_stable", variation < tol,
              "max-ratio variation " + format_number(variation) + " < " + format_number(tol));
}

void run_relative_bound(RunContext& ctx) {
  const auto& p = ctx.scenario.params;
  const TorusGrid& grid = ctx.scenario.grid;
  OperatorSpec spec = operator_spec_from_json(p, grid.dim());
  const LowerAssembly lower = assemble_lower(spec, grid, nullptr, false);

  Eigen::VectorXd gram(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    gram(i) = std::pow(1.0 + TorusGrid::abs2(grid.mode_at(i)), spec.m);
  const Matrix h1 = gram.asDiagonal();

  std::vector<double> eps_list = p.contains("eps") ? p.at("eps").get<std::vector<double>>()
                                                   : std::vector<double>{0.5, 0.25, 0.1};
  CsvWriter csv({"eps", "M", "max_violation"});
  std::vector<double> ms;
  for (double eps : eps_list) {
    const RelativeBoundCertificate cert =
        certify_relative_bound(lower.q, h1, eps, 100, ctx.scenario.seed ? ctx.scenario.seed : 0x5EED);
    ms.push_back(cert.M);
    csv.add_row({format_number(eps), format_number(cert.M), format_number(cert.max_violation)});
  }
  ctx.write_csv("report.csv", csv);
  ctx.verdict("certificates_validate", true, "zero probe violations beyond 1e-9");
  bool monotone = true;
  for (std::size_t i = 1; i < ms.size(); ++i) monotone = monotone && ms[i] >= ms[i - 1] - 1e-12;
  ctx.verdict("M_grows_as_eps_shrinks", monotone, "M(eps) nondecreasing along the eps list");
  ctx.results["M"] = ms;
  ctx.results["eps"] = eps_list;
}

void run_formsum_build(RunContext& ctx) {
  const auto& p = ctx.scenario.params;
  const TorusGrid& grid = ctx.scenario.grid;
  OperatorSpec spec = operator_spec_from_json(p, grid.dim());

  const Matrix t = assemble_principal(spec, grid, true);
  const Matrix t_unshifted = t - spec.rho0 * Matrix::Identity(grid.size(), grid.size());
  const CoercivityReport coercivity = verify_garding(t_unshifted, spec, grid);
  const LowerAssembly lower = assemble_lower(spec, grid, nullptr, true);

  Eigen::VectorXd gram(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    gram(i) = std::pow(1.0 + TorusGrid::abs2(grid.mode_at(i)), spec.m);
  const RelativeBoundCertificate cert = certify_relative_bound(
      lower.q, Matrix(gram.asDiagonal()), p.value("eps_target", 0.5), 100,
      ctx.scenario.seed ? ctx.scenario.seed : 0x5EED);

  const GeneralizedSum sum =
      build_generalized_sum(t, lower.q, coercivity, cert, spec.rho0, 100,
                            ctx.scenario.seed ? ctx.scenario.seed : 0x5EED);
  const SpectrumReport spectrum = compute_spectrum(sum, window_from_json(p));

  ctx.results["delta"] = coercivity.delta;
  ctx.results["c1"] = coercivity.c1;
  ctx.results["c2"] = coercivity.c2;
  ctx.results["eps"] = cert.eps;
  ctx.results["M"] = cert.M;
  ctx.results["sector"] = {{"vertex", sum.sector.vertex}, {"half_angle", sum.sector.half_angle}};
  ctx.verdict("coercive", true, "delta = " + format_number(coercivity.delta));
  ctx.verdict("relative_bound", true,
              "eps = " + format_number(cert.eps) + ", M = " + format_number(cert.M));
  ctx.verdict("sectorial", sum.sector.half_angle < M_PI / 2,
              "half angle " + format_number(sum.sector.half_angle));
  ctx.verdict("spectrum_in_sector", true,
              "backward error " + format_number(spectrum.max_backward_error));

  CsvWriter csv({"re", "im"});
  for (Eigen::Index i = 0; i < spectrum.eigenvalues.size(); ++i)
    csv.add_row({format_number(spectrum.eigenvalues(i).real()),
                 format_number(spectrum.eigenvalues(i).imag())});
  ctx.write_csv("spectrum.csv", csv);

  CsvWriter summary({"delta", "c1", "c2", "eps", "M", "sector_vertex", "sector_half_angle"});
  summary.add_row({format_number(coercivity.delta), format_number(coercivity.c1),
                   format_number(coercivity.c2), format_number(cert.eps), format_number(cert.M),
                   format_number(sum.sector.vertex), format_number(sum.sector.half_angle)});
  ctx.write_csv("report.csv", summary);

  if (p.value("export_matrices", false)) {
    write_matrix_binary(ctx.dir / "T.bin", sum.t);
    write_matrix_binary(ctx.dir / "Q.bin", sum.q);
    write_matrix_binary(ctx.dir / "S.bin", sum.s);
    ctx.files.insert(ctx.files.end(), {"T.bin", "Q.bin", "S.bin"});
  }
}

void study_common(RunContext& ctx, bool with_compact_check) {
  const auto& p = ctx.scenario.params;
  const TorusGrid& grid = ctx.scenario.grid;
  OperatorSpec spec = operator_spec_from_json(p, grid.dim());
  const std::vector<MollifierSpec> schedule = schedule_from_json(p);

  StudyOptions options;
  options.eps_target = p.value("eps_target", 0.5);
  options.upper_tol = p.value("upper_tol", 1e-3);
  options.lower_tol = p.value("lower_tol", 1e-3);
  options.window = window_from_json(p);
  options.threads = ctx.threads;

  GeneralizedSum limit;
  ConvergenceReport report = convergence_study(spec, grid, schedule, options, &limit);

  CsvWriter csv({"n", "h", "q_norm_gap", "resolvent_diff", "d_upper", "d_lower"});
  for (const auto& row : report.rows)
    csv.add_row({std::to_string(row.n), format_number(row.mollifier_parameter),
                 format_number(row.q_norm_gap), format_number(row.resolvent_diff),
                 format_number(row.d_upper), format_number(row.d_lower)});
  ctx.write_csv("report.csv", csv);

  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"n", row.n},
                    {"h", row.mollifier_parameter},
                    {"q_norm_gap", row.q_norm_gap},
                    {"resolvent_diff", row.resolvent_diff},
                    {"chain_bound", row.chain_bound},
                    {"chain_ok", row.chain_ok},
                    {"middle_factor", row.middle_factor},
                    {"middle_ok", row.middle_ok},
                    {"identity_residual", row.identity_residual},
                    {"identity_ok", row.identity_ok},
                    {"d_upper", row.d_upper},
                    {"d_lower", row.d_lower}});
  }
  ctx.results["rows"] = rows;
  ctx.results["coercivity"] = {{"delta", report.coercivity.delta},
                               {"c1", report.coercivity.c1},
                               {"c2", report.coercivity.c2}};
  ctx.results["certificate"] = {{"eps", report.certificate.eps}, {"M", report.certificate.M}};
  ctx.results["rho_reference"] = report.rho_reference;
  ctx.results["sector"] = {{"vertex", report.limit_sector.vertex},
                           {"half_angle", report.limit_sector.half_angle}};
  ctx.results["upper_conv"] = report.upper_conv;
  ctx.results["upper_tol"] = options.upper_tol;
  ctx.results["final_d_upper"] = report.final_d_upper;
  ctx.results["final_d_lower"] = report.final_d_lower;

  ctx.verdict("coercivity", true, "delta = " + format_number(report.coercivity.delta));
  ctx.verdict("relative_bound", true, "eps = " + format_number(report.certificate.eps));
  ctx.verdict("q_gap_strictly_decreasing", report.q_gap_decreasing);
  ctx.verdict("resolvent_diff_strictly_decreasing", report.resolvent_decreasing);
  ctx.verdict("d_upper_strictly_decreasing", report.d_upper_decreasing);
  ctx.verdict("theorem_chain_rows", report.chain_all_ok,
              "resolvent_diff <= c1^-2 ||T0^-1/2||^2 q_norm_gap + 1e-8 on every row");
  bool middles = true, identities = true;
  for (const auto& row : report.rows) {
    middles = middles && row.middle_ok;
    identities = identities && row.identity_ok;
  }
  ctx.verdict("middle_factor_rows", middles);
  ctx.verdict("factorization_identity_rows", identities, "relative residual <= 1e-10 per row");

  if (p.value("assert_upper", false))
    ctx.verdict("upper_conv", report.upper_conv,
                "final d_upper " + format_number(report.final_d_upper) + " <= " +
                    format_number(options.upper_tol));

  if (with_compact_check) {
    const double tol = p.value("semidist_tol", 1e-3);
    const CompactCheckVerdict check = symmetric_compact_check(limit, report, tol);
    report.lower_conv = !check.applicable ? LowerVerdict::not_applicable
                        : check.passed    ? LowerVerdict::pass
                                          : LowerVerdict::fail;
    nlohmann::ordered_json evidence = nlohmann::ordered_json::array();
    for (const auto& e : check.evidence)
      evidence.push_back({{"n", e.n}, {"d_upper", e.d_upper}, {"d_lower", e.d_lower}});
    ctx.results["symmetric_compact"] = {{"applicable", check.applicable},
                                        {"passed", check.passed},
                                        {"reason", check.reason},
                                        {"sigma_quarter_ratio", check.sigma_quarter_ratio},
                                        {"evidence", evidence}};
    ctx.verdict("symmetric_compact_applicable", check.applicable, check.reason);
    ctx.verdict("two_sided_convergence", check.passed, check.reason);
  }
  ctx.results["lower_conv"] = to_string(report.lower_conv);
}

void run_resolvent_identity(RunContext& ctx) {
  const auto& p = ctx.scenario.params;
  const TorusGrid& grid = ctx.scenario.grid;
  const Eigen::Index dim = grid.size();

  Eigen::VectorXd gram_diag(dim);
  Eigen::VectorXd gm_diag(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double a2 = TorusGrid::abs2(grid.mode_at(i));
    gram_diag(i) = 1.0 + a2;  // H^1 Gram
    gm_diag(i) = a2;          // first-derivative Gram
  }
  const Matrix gram = gram_diag.asDiagonal();
  const Matrix gram_sqrt = gram_diag.cwiseSqrt().asDiagonal();

  auto coercivity_of = [&](const Matrix& t) {
    CoercivityReport rep;
    const Matrix re = hermitian_part(t);
    rep.c1 = generalized_lambda_min(re, gram);
    rep.c2 = generalized_lambda_max(re, gram);
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < dim; ++i)
      if (gm_diag(i) > 0.0) idx.push_back(i);
    Matrix a(idx.size(), idx.size());
    Matrix b = Matrix::Zero(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
      b(r, r) = gm_diag(idx[r]);
      for (std::size_t c = 0; c < idx.size(); ++c) a(r, c) = re(idx[r], idx[c]);
    }
    rep.delta = generalized_lambda_min(a, b);
    return rep;
  };

  struct Case {
    std::string name;
    Matrix t, q, q_n;
  };
  std::vector<Case> cases;

  {  // diagonal analytic case: T = diag(j^2+1), Q = 0, Q_n = (1/n) I
    Case c;
    c.name = "diagonal";
    c.t = gram;
    c.q = Matrix::Zero(dim, dim);
    c.q_n = (1.0 / 8.0) * Matrix::Identity(dim, dim);
    cases.push_back(std::move(c));
  }
  const int random_cases = p.value("random_cases", 5);
  for (int i = 0; i < random_cases; ++i) {
    Rng rng(ctx.scenario.seed + 1000 + static_cast<std::uint64_t>(i));
    auto random_hermitian = [&]() {
      Matrix b(dim, dim);
      for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) b(r, c) = rng.next_complex_normal();
      Matrix h = hermitian_part(b);
      return Matrix(h / operator_norm(h));
    };
    Case c;
    c.name = "random_" + std::to_string(i);
    c.t = gram_sqrt *
          (Matrix::Identity(dim, dim) + 0.3 * random_hermitian() +
           std::complex<double>(0.0, 0.4) * random_hermitian()) *
          gram_sqrt;
    // rank-3 perturbation, mollified approximant via a plateau window
    c.q = Matrix::Zero(dim, dim);
    for (int r = 0; r < 3; ++r) {
      const Vector u = rng.complex_gaussian_vector(dim);
      const Vector v = rng.complex_gaussian_vector(dim);
      c.q += 0.2 * u * v.adjoint();
    }
    Eigen::VectorXd damp(dim);
    const MollifierSpec window = MollifierSpec::fejer(grid.bandlimit() / 2);
    for (Eigen::Index r = 0; r < dim; ++r) damp(r) = window.damping(grid.mode_at(r));
    c.q_n = damp.asDiagonal() * c.q * damp.asDiagonal();
    cases.push_back(std::move(c));
  }

  CsvWriter csv({"case", "rho", "residual"});
  bool all_ok = true;
  for (const auto& c : cases) {
    const CoercivityReport coercivity = coercivity_of(c.t);
    RelativeBoundCertificate cert = certify_relative_bound(c.q, gram, 0.5, 100, 0x5EED);
    const GeneralizedSum limit = build_generalized_sum(c.t, c.q, coercivity, cert, 0.0);
    RelativeBoundCertificate cert_n = certify_relative_bound(c.q_n, gram, 0.5, 100, 0x5EED);
    const GeneralizedSum approx = build_generalized_sum(c.t, c.q_n, coercivity, cert_n, 0.0);
    const double z_floor = std::min(limit.z_herm_min, approx.z_herm_min);
    const double rho =
        p.contains("rho") ? p.at("rho").get<double>() : std::max(0.0, 1.0 - z_floor) + 1.0;
    const double residual = verify_resolvent_identity(limit, approx, rho);
    all_ok = all_ok && residual <= 1e-10;
    csv.add_row({c.name, format_number(rho), format_number(residual)});
  }
  ctx.write_csv("report.csv", csv);
  ctx.verdict("factorization_identity", all_ok, "relative residual <= 1e-10 for every case");
}

// --- dispatch ---------------------------------------------------------------

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::garding: return "garding";
    case ScenarioKind::multiplier_table: return "multiplier_table";
    case ScenarioKind::embedding_sweep: return "embedding_sweep";
    case ScenarioKind::relative_bound: return "relative_bound";
    case ScenarioKind::formsum_build: return "formsum_build";
    case ScenarioKind::convergence_study: return "convergence_study";
    case ScenarioKind::symmetric_compact: return "symmetric_compact";
    case ScenarioKind::resolvent_identity: return "resolvent_identity";
  }
  return "unknown";
}

ScenarioKind scenario_kind_from_string(const std::string& s) {
  for (ScenarioKind k :
       {ScenarioKind::garding, ScenarioKind::multiplier_table, ScenarioKind::embedding_sweep,
        ScenarioKind::relative_bound, ScenarioKind::formsum_build, ScenarioKind::convergence_study,
        ScenarioKind::symmetric_compact, ScenarioKind::resolvent_identity})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown scenario kind '" + s + "'");
}

Scenario parse_scenario(const nlohmann::json& config) {
  if (!config.is_object()) throw ConfigError("scenario config must be a JSON object");
  Scenario s;
  try {
    s.kind = scenario_kind_from_string(need(config, "kind").get<std::string>());
    s.label = config.value("label", to_string(s.kind));
    const auto& gj = need(config, "grid");
    s.grid = TorusGrid(need(gj, "n").get<int>(), need(gj, "N").get<int>());
    s.seed = config.value("seed", 0ULL);
    s.params = config.value("params", nlohmann::json::object());
    s.claim_id = config.value("claim_id", "");
    s.claim = config.value("claim", "");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad scenario config: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("bad scenario config: ") + e.what());
  }
  return s;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open scenario file " + path.string());
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed JSON in ") + path.string() + ": " + e.what());
  }
  return parse_scenario(j);
}

nlohmann::ordered_json scenario_to_json(const Scenario& s) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(s.kind);
  j["label"] = s.label;
  j["grid"] = {{"n", s.grid.dim()}, {"N", s.grid.bandlimit()}};
  j["seed"] = s.seed;
  j["claim_id"] = s.claim_id;
  j["claim"] = s.claim;
  j["params"] = s.params;
  return j;
}

RunManifest run_scenario(const Scenario& scenario, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();

  RunContext ctx{scenario, options.out_dir / scenario.label, std::max(1, options.threads)};
  std::filesystem::create_directories(ctx.dir);

  switch (scenario.kind) {
    case ScenarioKind::garding: run_garding(ctx); break;
    case ScenarioKind::multiplier_table: run_multiplier_table(ctx); break;
    case ScenarioKind::embedding_sweep: run_embedding_sweep(ctx); break;
    case ScenarioKind::relative_bound: run_relative_bound(ctx); break;
    case ScenarioKind::formsum_build: run_formsum_build(ctx); break;
    case ScenarioKind::convergence_study: study_common(ctx, false); break;
    case ScenarioKind::symmetric_compact: study_common(ctx, true); break;
    case ScenarioKind::resolvent_identity: run_resolvent_identity(ctx); break;
  }

  RunManifest manifest;
  manifest.version = kVersion;

  nlohmann::ordered_json verdicts = nlohmann::ordered_json::array();
  for (const auto& v : ctx.verdicts) {
    verdicts.push_back({{"name", v.name}, {"passed", v.passed}, {"detail", v.detail}});
    if (v.passed)
      ++manifest.verdicts_passed;
    else {
      ++manifest.verdicts_failed;
      manifest.failed_verdicts.push_back(v.name);
    }
  }

  nlohmann::ordered_json verdict_doc;
  verdict_doc["label"] = scenario.label;
  verdict_doc["kind"] = to_string(scenario.kind);
  verdict_doc["claim_id"] = scenario.claim_id;
  verdict_doc["claim"] = scenario.claim;
  verdict_doc["grid"] = {{"n", scenario.grid.dim()}, {"N", scenario.grid.bandlimit()}};
  verdict_doc["seed"] = scenario.seed;
  verdict_doc["verdicts"] = verdicts;
  verdict_doc["results"] = ctx.results;
  ctx.write_json("verdicts.json", verdict_doc);

  const auto stop = std::chrono::steady_clock::now();
  manifest.wall_seconds = std::chrono::duration<double>(stop - start).count();

  char hash_buf[20];
  std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(scenario_to_json(scenario).dump())));
  manifest.scenario_hash = hash_buf;
  manifest.files = ctx.files;

  nlohmann::ordered_json mj;
  mj["scenario_hash"] = manifest.scenario_hash;
  mj["version"] = manifest.version;
  mj["wall_seconds"] = manifest.wall_seconds;
  mj["verdicts_passed"] = manifest.verdicts_passed;
  mj["verdicts_failed"] = manifest.verdicts_failed;
  mj["failed"] = manifest.failed_verdicts;
  mj["files"] = manifest.files;
  write_json_file(ctx.dir / "manifest.json", mj);

  return manifest;
}

}  // namespace formsum
