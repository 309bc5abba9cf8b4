// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "formsum/formsum.hpp"

namespace formsum {

// Comparison window in the physical (shift-removed) plane.
struct SpectralWindow {
  double re_min = -10.0;
  double re_max = 50.0;
  double im_abs = 25.0;

  bool contains(std::complex<double> z) const {
    return z.real() >= re_min && z.real() <= re_max && std::abs(z.imag()) <= im_abs;
  }
};

struct SpectrumReport {
  Vector eigenvalues;  // all of them, shift already removed
  SpectralWindow window;
  double shift_removed = 0.0;
  bool hermitian = false;
  double max_backward_error = 0.0;
};

SpectrumReport compute_spectrum(const GeneralizedSum& sum, const SpectralWindow& window = {});

struct Semidistances {
  double upper = 0.0;  // sup over a-eigenvalues in window of dist to b
  double lower = 0.0;  // sup over b-eigenvalues in window of dist to a
  bool a_window_empty = false;
  bool b_window_empty = false;
};

Semidistances semidistances(const SpectrumReport& a, const SpectrumReport& b,
                            const SpectralWindow& window);

struct StudyRow {
  int n = 0;
  double mollifier_parameter = 0.0;
  double q_norm_gap = 0.0;       // ||Q - Q_n||_{H^m -> H^-m}
  double resolvent_diff = 0.0;   // ||(S_n + rho T0)^{-1} - (S + rho T0)^{-1}||
  double d_upper = 0.0;
  double d_lower = 0.0;
  double chain_bound = 0.0;      // c1^{-2} ||T0^{-1/2}||^2 q_norm_gap
  bool chain_ok = false;         // resolvent_diff <= chain_bound + 1e-8
  double middle_factor = 0.0;    // ||T0^{-1/2}(Q-Q_n)T0^{-1/2}||
  bool middle_ok = false;        // middle_factor <= q_norm_gap/(c1 * min weight) + 1e-8
  double identity_residual = 0.0;
  // relative residual 1e-10 with an absolute floor for rows whose resolvent
  // difference is too small to resolve from the two inverses
  bool identity_ok = true;
};

enum class LowerVerdict { pass, fail, not_asserted, not_applicable };

std::string to_string(LowerVerdict v);

struct StudyOptions {
  double eps_target = 0.5;
  double upper_tol = 1e-3;   // threshold for the upper_conv verdict
  double lower_tol = 1e-3;
  SpectralWindow window{};
  int threads = 1;
  bool check_identity = true;
  std::uint64_t probe_seed = 0x5EEDULL;
};

struct ConvergenceReport {
  std::vector<StudyRow> rows;
  CoercivityReport coercivity;
  RelativeBoundCertificate certificate;
  SectorEstimate limit_sector;
  Vector limit_eigenvalues;  // shift removed
  double rho_reference = 0.0;   // weighted resolvent point: S + rho T0
  double t0_inv_norm = 0.0;     // ||T0^{-1/2}||^2
  SpectralWindow window;
  // verdicts
  bool resolvent_decreasing = false;  // strictly, row over row
  bool q_gap_decreasing = false;
  bool d_upper_decreasing = false;
  bool chain_all_ok = false;
  bool upper_conv = false;            // final d_upper <= upper_tol
  LowerVerdict lower_conv = LowerVerdict::not_asserted;
  double final_d_upper = 0.0;
  double final_d_lower = 0.0;
};

// Builds the singular limit sum and the mollified family, one row per
// schedule entry. The resolvent difference is measured at the common
// T0-weighted point rho chosen so that the Hausdorff bound
// ||(Z_n + rho)^{-1}|| <= c1^{-1} is certified for every row.
ConvergenceReport convergence_study(const OperatorSpec& spec, const TorusGrid& grid,
                                    const std::vector<MollifierSpec>& schedule,
                                    const StudyOptions& options = {},
                                    GeneralizedSum* limit_out = nullptr);

struct CompactCheckEvidence {
  int n = 0;
  double d_upper = 0.0;
  double d_lower = 0.0;
};

struct CompactCheckVerdict {
  bool applicable = false;
  bool passed = false;
  std::string reason;
  std::vector<CompactCheckEvidence> evidence;
  double sigma_quarter_ratio = 0.0;  // compactness proxy: sigma_{dim/4}/sigma_0 of weighted Q
};

// Two-sided convergence check for the Hermitian + compact case: demands the
// limit sum be Hermitian and the weighted Q pass the singular-value decay
// proxy, then asserts both semidistances decrease to the tolerance. When the
// hypotheses fail the verdict is not-applicable, never a false assertion.
CompactCheckVerdict symmetric_compact_check(const GeneralizedSum& limit,
                                            const ConvergenceReport& study,
                                            double semidist_tol = 1e-3,
                                            double hermitian_tol = 1e-9,
                                            double proxy_threshold = 0.05);

}  // namespace formsum
