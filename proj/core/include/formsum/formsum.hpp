// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "formsum/multipliers.hpp"

namespace formsum {

// L = sum_{|alpha|,|beta| <= m} D^alpha c_{alpha,beta} D^beta on the torus.
// Principal entries (|alpha| = |beta| = m) must realize bounded functions;
// lower entries (|alpha| + |beta| < 2m) may be distributions.
struct OperatorEntry {
  MultiIndex alpha;
  MultiIndex beta;
  CoefficientSpec coef;
};

struct OperatorSpec {
  int m = 1;
  int dim = 1;
  std::vector<OperatorEntry> principal;
  std::vector<OperatorEntry> lower;
  double rho0 = 1.0;  // shift added to the principal form

  void validate() const;
};

struct CoercivityReport {
  double delta = 0.0;  // Garding constant of the unshifted principal form
  double c1 = 0.0;     // two-sided H^m constants after shift
  double c2 = 0.0;
};

struct RelativeBoundCertificate {
  double eps = 0.0;
  double M = 0.0;
  double max_violation = 0.0;  // over the probe set, should be <= 1e-9
  int probes = 0;
};

struct SectorEstimate {
  double vertex = 0.0;      // sector {|Im z| <= tan(theta) (Re z + vertex)}
  double half_angle = 0.0;  // theta < pi/2
  int probes = 0;
};

// Principal form matrix T = sum S_alpha^* C_c S_beta (+ rho0 I when
// include_shift), in orthonormal L2 coordinates.
Matrix assemble_principal(const OperatorSpec& spec, const TorusGrid& grid, bool include_shift = true);

// delta = min generalized eigenvalue of Re T_unshifted against
// G_m = sum_{|alpha|=m} S_alpha^* S_alpha on the complement of its kernel;
// c1, c2 against the full H^m Gram after the rho0 shift. Throws
// PreconditionError when delta <= 0 (coercivity failure).
CoercivityReport verify_garding(const Matrix& t_unshifted, const OperatorSpec& spec,
                                const TorusGrid& grid);

struct LowerAssembly {
  Matrix q;
  std::vector<RelativeBoundCurve> curves;  // one per entry, slot k=m-|beta|, l=m-|alpha|
};

// Q = sum_{|alpha|+|beta|<2m} S_alpha^* C_c S_beta with a relative-bound
// curve per entry. Optional mollifier damps every lower coefficient.
LowerAssembly assemble_lower(const OperatorSpec& spec, const TorusGrid& grid,
                             const MollifierSpec* mollifier = nullptr,
                             bool with_curves = true);

// |(Qf,f)| <= eps (f,f)_{H^m} + M(eps) (f,f)_{L2}: M from a 64-angle support
// sweep of the rotated Hermitian parts, validated on unit-norm probes.
RelativeBoundCertificate certify_relative_bound(const Matrix& q, const Matrix& h1_gram,
                                                double eps_target, int probe_count = 100,
                                                std::uint64_t probe_seed = 0x5EEDULL,
                                                int theta_grid = 64);

// Field-of-values sector fit from the support function over a theta grid.
// Throws PreconditionError when no sector with theta < pi/2 contains the
// sampled boundary.
SectorEstimate sector_estimate(const Matrix& s, int theta_grid = 64);

struct GeneralizedSum {
  Matrix t;             // shifted principal form matrix
  Matrix q;             // lower-order form matrix
  Matrix s;             // t + q
  Matrix t0;            // Hermitian part of t
  Matrix t0_inv_sqrt;   // t0^{-1/2}
  Matrix z;             // t0^{-1/2} s t0^{-1/2}
  SectorEstimate sector;
  CoercivityReport coercivity;
  double rho0 = 0.0;
  double z_herm_min = 0.0;  // lambda_min of the Hermitian part of z
};

// The finite-dimensional generalized sum S = T +~ Q: builds T0, Z, the
// sector estimate, and checks the lower numerical-range bound
// Re((Z + rho) y, y) >= (1 - eps/c1) ||y||^2 at rho = M(eps)/c1 on probes.
GeneralizedSum build_generalized_sum(const Matrix& t, const Matrix& q,
                                     const CoercivityReport& coercivity,
                                     const RelativeBoundCertificate& certificate,
                                     double rho0, int probe_count = 100,
                                     std::uint64_t probe_seed = 0x5EEDULL);

// (S - rho)^{-1} with residual enforcement; rho should lie outside the
// estimated sector unless the caller accepts the risk.
Matrix resolvent(const GeneralizedSum& sum, std::complex<double> rho, bool accept_risk = false,
                 double tol = 1e-9);

// Relative residual of the factorization
//   (S_n + rho T0)^{-1} - (S + rho T0)^{-1}
//     = T0^{-1/2} (Z_n + rho)^{-1} [T0^{-1/2}(Q - Q_n)T0^{-1/2}] (Z + rho)^{-1} T0^{-1/2}
// for two sums sharing T (and hence T0). rho > 0 must make Z + rho and
// Z_n + rho invertible; the identity is then exact up to roundoff.
double verify_resolvent_identity(const GeneralizedSum& limit, const GeneralizedSum& approx,
                                 double rho);

}  // namespace formsum
