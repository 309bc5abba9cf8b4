// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "formsum/coefficients.hpp"
#include "formsum/linalg.hpp"

namespace formsum {

// M_phi: H^k -> H^{-l} in orthonormalized coordinates,
//   A[i,j] = (1+|i|^2)^{-l/2} (2pi)^{-n/2} phi_{i-j} (1+|j|^2)^{-k/2},
// phi coefficients outside phi's own band count as zero. The trial grid and
// phi's grid are independent; realizing phi at bandlimit 2N makes the matrix
// exact for every in-band mode difference.
struct MultiplierOperator {
  SpectralField phi;
  double k = 0.0;
  double l = 0.0;
  TorusGrid grid;  // trial grid
  Matrix matrix;
};

MultiplierOperator assemble(const SpectralField& phi, double k, double l, const TorusGrid& trial);
// realizes the coefficient at bandlimit 2N on the trial dimension first
MultiplierOperator assemble(const CoefficientSpec& spec, double k, double l, const TorusGrid& trial);

// sigma_max of the weighted convolution matrix: the truncated multiplier
// norm, a certified lower bound of the continuum norm, nondecreasing in N.
double multiplier_norm(const MultiplierOperator& op, const NormOptions& opts = {});

// (||phi||_{M[k,-l]}, ||phi||_{M[l,-k]}); equal up to solver accuracy.
std::pair<double, double> check_symmetry(const SpectralField& phi, double k, double l,
                                         const TorusGrid& trial);

// Requires k2 < k1, k1+l1 = k2+l2 and l1 <= k2 <= k1; returns true when
// ||phi||_{M[k2,-l2]} <= ||phi||_{M[k1,-l1]} (1 + 1e-9).
bool check_interpolation(const SpectralField& phi, double k1, double l1, double k2, double l2,
                         const TorusGrid& trial);

// Relative-bound data for the small-relative-norm test: for each cutoff L,
//   eps(L)  = sigma_max of A restricted to input modes |j|_inf > L,
//   M(L)    = sigma_max of A restricted to |j|_inf <= L times the largest
//             H^k/L2 weight ratio on those modes,
// so that ||M_phi f||_{-l} <= eps(L) ||f||_k + M(L) ||f||_0 for all in-band f.
struct RelativeBoundCurve {
  std::vector<int> cutoffs;
  std::vector<double> eps;
  std::vector<double> witness_M;
  double full_norm = 0.0;
  double k = 0.0, l = 0.0;
  int bandlimit = 0;

  // small-relative-norm proxy: eps at the first cutoff >= N/2 below `threshold`
  bool small_relative_norm(double threshold = 0.1) const;
};

RelativeBoundCurve relative_bound_curve(const MultiplierOperator& op, const std::vector<int>& cutoffs,
                                        const NormOptions& opts = {});

// Matrix of the quadratic form phi_m[f,g] = (phi D^{m-k} f, D^{m-l} g) in L2
// coordinates: B = S_{m-l}^* C_phi S_{m-k}; k, l, m integers with k,l <= m.
Matrix lower_order_form(const SpectralField& phi, int k, int l, int m, const TorusGrid& trial);

enum class EmbeddingLemma { H2, Hp, Polking };

struct EmbeddingParams {
  EmbeddingLemma lemma = EmbeddingLemma::H2;
  double k = 1.0;
  double l = 1.0;
  double gamma = 0.0;  // Hp / Polking only
  double p = 2.0;      // Hp / Polking only
};

struct EmbeddingSampleRow {
  std::string sample_id;
  double source_norm = 0.0;
  double mult_norm = 0.0;
  double ratio = 0.0;
};

struct EmbeddingReport {
  EmbeddingParams params;
  int bandlimit = 0;
  std::vector<EmbeddingSampleRow> rows;
  double max_ratio = 0.0;
  // H2 branch only: empirical constant of ||f g||_l <= C ||f||_k ||g||_l
  double product_constant = 0.0;
};

// Validates the lemma hypotheses (throws PreconditionError otherwise), then
// reports sup ||phi||_{M[k,-l]} / ||phi||_source over the samples. Source
// norms: H2 -> H^{-l} of the trial-band realization; Hp/Polking -> the
// (gamma, p) Bessel-Lp norm.
EmbeddingReport embedding_sweep(const EmbeddingParams& params,
                                const std::vector<CoefficientSpec>& samples, const TorusGrid& trial,
                                Rng& rng, int product_check_pairs = 16);

void validate_embedding_hypotheses(const EmbeddingParams& params, int dim);

}  // namespace formsum
