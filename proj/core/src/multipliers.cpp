// SPDX-License-Identifier: Apache-2.0
#include "formsum/multipliers.hpp"

#include <cmath>

namespace formsum {

MultiplierOperator assemble(const SpectralField& phi, double k, double l, const TorusGrid& trial) {
  if (k < 0.0 || l < 0.0) throw PreconditionError("assemble: k and l must be >= 0");
  require_same_dim(phi.grid, trial, "assemble");
  const Eigen::Index dim = trial.size();
  const double scale = std::pow(kTwoPi, -0.5 * trial.dim());
  Eigen::VectorXd wl(dim), wk(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double a2 = TorusGrid::abs2(trial.mode_at(i));
    wl(i) = std::pow(1.0 + a2, -l / 2.0);
    wk(i) = std::pow(1.0 + a2, -k / 2.0);
  }
  Matrix a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Mode mi = trial.mode_at(i);
    for (Eigen::Index j = 0; j < dim; ++j) {
      const Mode mj = trial.mode_at(j);
      a(i, j) = wl(i) * scale * phi.at({mi[0] - mj[0], mi[1] - mj[1]}) * wk(j);
    }
  }
  return {phi, k, l, trial, std::move(a)};
}

MultiplierOperator assemble(const CoefficientSpec& spec, double k, double l, const TorusGrid& trial) {
  const TorusGrid wide(trial.dim(), 2 * trial.bandlimit());
  return assemble(realize(spec, wide), k, l, trial);
}

double multiplier_norm(const MultiplierOperator& op, const NormOptions& opts) {
  return operator_norm(op.matrix, opts);
}

std::pair<double, double> check_symmetry(const SpectralField& phi, double k, double l,
                                         const TorusGrid& trial) {
  const double n_kl = multiplier_norm(assemble(phi, k, l, trial));
  const double n_lk = multiplier_norm(assemble(phi, l, k, trial));
  return {n_kl, n_lk};
}

bool check_interpolation(const SpectralField& phi, double k1, double l1, double k2, double l2,
                         const TorusGrid& trial) {
  if (!(k2 < k1))
    throw PreconditionError("check_interpolation: requires k2 < k1");
  if (std::abs((k1 + l1) - (k2 + l2)) > 1e-12)
    throw PreconditionError("check_interpolation: requires k1 + l1 = k2 + l2");
  if (!(l1 <= k2 && k2 <= k1))
    throw PreconditionError("check_interpolation: (k2,l2) must lie between (k1,l1) and (l1,k1)");
  const double big = multiplier_norm(assemble(phi, k1, l1, trial));
  const double mid = multiplier_norm(assemble(phi, k2, l2, trial));
  return mid <= big * (1.0 + 1e-9);
}

bool RelativeBoundCurve::small_relative_norm(double threshold) const {
  const int half = bandlimit / 2;
  for (std::size_t i = 0; i < cutoffs.size(); ++i)
    if (cutoffs[i] >= half) return eps[i] <= threshold;
  return false;
}

RelativeBoundCurve relative_bound_curve(const MultiplierOperator& op, const std::vector<int>& cutoffs,
                                        const NormOptions& opts) {
  for (std::size_t i = 1; i < cutoffs.size(); ++i)
    if (cutoffs[i] <= cutoffs[i - 1])
      throw PreconditionError("relative_bound_curve: cutoffs must be ascending");
  if (!cutoffs.empty() && cutoffs.back() > op.grid.bandlimit())
    throw PreconditionError("relative_bound_curve: cutoff exceeds bandlimit");

  RelativeBoundCurve curve;
  curve.cutoffs = cutoffs;
  curve.k = op.k;
  curve.l = op.l;
  curve.bandlimit = op.grid.bandlimit();
  curve.full_norm = operator_norm(op.matrix, opts);

  const Eigen::Index dim = op.grid.size();
  std::vector<double> inf_norms(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Mode m = op.grid.mode_at(j);
    inf_norms[j] = std::max(std::abs(m[0]), op.grid.dim() == 2 ? std::abs(m[1]) : 0);
  }

  for (int lam : cutoffs) {
    std::vector<Eigen::Index> high, low;
    for (Eigen::Index j = 0; j < dim; ++j) (inf_norms[j] > lam ? high : low).push_back(j);
    auto col_block = [&](const std::vector<Eigen::Index>& idx) {
      Matrix sub(dim, static_cast<Eigen::Index>(idx.size()));
      for (std::size_t c = 0; c < idx.size(); ++c) sub.col(c) = op.matrix.col(idx[c]);
      return sub;
    };
    const double eps = high.empty() ? 0.0 : operator_norm(col_block(high), opts);
    double witness = 0.0;
    if (!low.empty()) {
      const double sigma_low = operator_norm(col_block(low), opts);
      double wmax = 0.0;
      for (Eigen::Index j : low)
        wmax = std::max(wmax, std::pow(1.0 + TorusGrid::abs2(op.grid.mode_at(j)), op.k / 2.0));
      witness = sigma_low * wmax;
    }
    curve.eps.push_back(eps);
    curve.witness_M.push_back(witness);
  }
  return curve;
}

Matrix lower_order_form(const SpectralField& phi, int k, int l, int m, const TorusGrid& trial) {
  if (k < 0 || l < 0 || k > m || l > m)
    throw PreconditionError("lower_order_form: needs integer 0 <= k,l <= m");
  if (trial.dim() != 1)
    throw PreconditionError("lower_order_form: scalar-order form is 1D; use assemble_lower in 2D");
  const Eigen::Index dim = trial.size();
  const double scale = std::pow(kTwoPi, -0.5 * trial.dim());
  const MultiIndex left(std::vector<int>{m - l});
  const MultiIndex right(std::vector<int>{m - k});
  Matrix b(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Mode mi = trial.mode_at(i);
    const double si = derivative_symbol(mi, left);
    for (Eigen::Index j = 0; j < dim; ++j) {
      const Mode mj = trial.mode_at(j);
      b(i, j) = si * scale * phi.at({mi[0] - mj[0], mi[1] - mj[1]}) *
                derivative_symbol(mj, right);
    }
  }
  return b;
}

void validate_embedding_hypotheses(const EmbeddingParams& p, int dim) {
  const double half_n = 0.5 * dim;
  switch (p.lemma) {
    case EmbeddingLemma::H2:
      if (!(p.k > half_n))
        throw PreconditionError("embedding H2: requires k > n/2");
      break;
    case EmbeddingLemma::Hp: {
      if (!(p.k <= half_n)) throw PreconditionError("embedding Hp: requires k <= n/2");
      if (!(p.gamma <= p.l)) throw PreconditionError("embedding Hp: requires gamma <= l");
      if (!(p.p > 1.0)) throw PreconditionError("embedding Hp: requires p > 1");
      const double crit = dim / (p.k + p.l - p.gamma);
      if (!(p.p > crit))
        throw PreconditionError("embedding Hp: requires p > n/(k+l-gamma)");
      break;
    }
    case EmbeddingLemma::Polking: {
      if (!(p.k < half_n)) throw PreconditionError("embedding boundary case: requires k < n/2");
      if (!(p.gamma <= p.l))
        throw PreconditionError("embedding boundary case: requires gamma <= l");
      if (!(p.p > 1.0)) throw PreconditionError("embedding boundary case: requires p > 1");
      const double crit = dim / (p.k + p.l - p.gamma);
      if (!(p.p >= crit - 1e-12))
        throw PreconditionError("embedding boundary case: requires p >= n/(k+l-gamma)");
      break;
    }
  }
}

EmbeddingReport embedding_sweep(const EmbeddingParams& params,
                                const std::vector<CoefficientSpec>& samples, const TorusGrid& trial,
                                Rng& rng, int product_check_pairs) {
  validate_embedding_hypotheses(params, trial.dim());
  EmbeddingReport report;
  report.params = params;
  report.bandlimit = trial.bandlimit();

  for (std::size_t s = 0; s < samples.size(); ++s) {
    const SpectralField on_trial = realize(samples[s], trial);
    double source = 0.0;
    if (params.lemma == EmbeddingLemma::H2) {
      source = sobolev_norm(on_trial, -params.l);
    } else {
      source = lp_sobolev_norm(on_trial, {params.gamma, params.p, 0}).value;
    }
    if (source <= 0.0) throw PreconditionError("embedding_sweep: sample with zero source norm");
    const double mult = multiplier_norm(assemble(samples[s], params.k, params.l, trial));
    EmbeddingSampleRow row;
    row.sample_id = samples[s].label() + "#" + std::to_string(s);
    row.source_norm = source;
    row.mult_norm = mult;
    row.ratio = mult / source;
    report.max_ratio = std::max(report.max_ratio, row.ratio);
    report.rows.push_back(std::move(row));
  }

  if (params.lemma == EmbeddingLemma::H2) {
    double cmax = 0.0;
    for (int t = 0; t < product_check_pairs; ++t) {
      SpectralField f(trial), g(trial);
      f.coeffs = rng.complex_gaussian_vector(trial.size());
      g.coeffs = rng.complex_gaussian_vector(trial.size());
      const SpectralField fg = pointwise_product(f, g);
      const double num = sobolev_norm(fg, params.l);
      const double den = sobolev_norm(f, params.k) * sobolev_norm(g, params.l);
      if (den > 0.0) cmax = std::max(cmax, num / den);
    }
    report.product_constant = cmax;
  }
  return report;
}

}  // namespace formsum
