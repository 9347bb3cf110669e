#pragma once

#include <functional>
#include <vector>

#include "zeta_ladder/ladder.hpp"
#include "zeta_ladder/ortho.hpp"
#include "zeta_ladder/quadrature.hpp"

namespace zeta_ladder {

inline constexpr int kGramMaxN = 12;

struct VerifyOptions {
    /// Quadrature tolerance; <= 0 selects default_lifted_tol(k).
    double tol = 0.0;
    int max_panels = 20000;
    unsigned threads = 0;
    /// Split the initial partition at sign changes of Z along the orbit.
    bool seed_breakpoints = true;
    /// Pass thresholds for the substitution identity: |lhs - rhs| <= max(rel * |lhs|, abs * H).
    double check_rel = 1e-5;
    double check_abs_per_length = 1e-8;
    int n_max = kGramMaxN;
    ProgressFn progress;
};

/// 1e-8 for k <= 1, 1e-6 for deeper compositions.
[[nodiscard]] double default_lifted_tol(int k) noexcept;

/// Integrates a dim-component function of the forward orbit over
/// [seq.lows[k], seq.highs[k]]. Orbits are computed once per abscissa and
/// shared by every component; `component(orbit, out)` fills out[0..dim) and
/// may be called concurrently.
using OrbitIntegrand = std::function<void(Orbit& orbit, double* out)>;

[[nodiscard]] VectorQuadResult integrate_orbit(const Ladder& ladder, const IterSeq& seq, std::size_t dim,
                                               const OrbitIntegrand& component, const VerifyOptions& options);

/// Abscissae in (a, b) where Z(phi1^r(t)) changes sign for some r < k,
/// located to about 1e-9 relative width.
[[nodiscard]] std::vector<double> orbit_sign_changes(const Ladder& ladder, double a, double b, int k,
                                                     unsigned threads = 0);

struct SubstitutionReport {
    double T = 0.0;
    double H = 0.0;
    int k = 0;
    double segment_lo = 0.0;
    double segment_hi = 0.0;
    double lhs = 0.0;
    double lhs_error = 0.0;
    double rhs = 0.0;
    double rhs_error = 0.0;
    double abs_diff = 0.0;
    double rel_diff = 0.0;
    double limit = 0.0;  // max(check_rel * |lhs|, check_abs_per_length * H)
    double tol = 0.0;
    long evaluations = 0;
    bool converged = true;
    bool passed = false;
};

/// Both sides of the change of variables
///   int_T^{T+H} f = int_{T^k}^{(T+H)^k} f(phi1^k(t)) prod_r phi1'(phi1^r(t)) dt.
[[nodiscard]] SubstitutionReport verify_substitution(const std::function<double(double)>& f, double T, double H,
                                                     int k, const Ladder& ladder, const VerifyOptions& options = {});

struct GramReport {
    int N = 0;
    int k = 0;
    double T = 0.0;
    double l = 0.0;
    double segment_lo = 0.0;
    double segment_hi = 0.0;
    std::vector<int> indices;
    std::vector<std::vector<double>> matrix;
    std::vector<std::vector<double>> errors;
    NormTable norms_expected;
    double max_offdiag_rel = 0.0;   // max |G_mn| / sqrt(A_m A_n), m != n
    double max_diag_rel_err = 0.0;  // max |G_nn / A_n - 1|
    double tol = 0.0;
    long evaluations = 0;
    int panels = 0;
    bool converged = true;
};

/// Gram matrix of the first N members of a lifted system. The integrand of
/// entry (m, n) is member_m * member_n, i.e. f_m f_n prod phi1'.
[[nodiscard]] GramReport gram_matrix(const LiftedSystem& ls, int N, const VerifyOptions& options = {});

/// Same report for the base system itself on [0, 2l] (k = 0).
[[nodiscard]] GramReport base_gram_matrix(const BaseSystem& base, int N, const VerifyOptions& options = {});

struct MomentReport {
    double T = 0.0;
    int k = 0;
    double l = 0.0;
    double segment_lo = 0.0;
    double segment_hi = 0.0;
    QuadResult quad;
    double reference = 0.0;  // 2l, 2l ln^k T or Omega
    double ratio = 0.0;      // quad.value / reference
    /// k = 0 moment_zeta only: hl_integral(T + 2l) - hl_integral(T).
    double cross_check = 0.0;
    double tol = 0.0;
    bool converged = true;
};

/// int prod_r phi1'(phi1^r(t)) over the reverse segment of [T, T+2l]; equals 2l.
[[nodiscard]] MomentReport moment_exact(double T, int k, double l, const Ladder& ladder,
                                        const VerifyOptions& options = {});

/// int prod_r Z^2(phi1^r(t)) over the same segment; reference 2l ln^k T.
/// k = 0 integrates Z^2 over [T, T+2l] with reference 2l and fills cross_check.
[[nodiscard]] MomentReport moment_zeta(double T, int k, double l, const Ladder& ladder,
                                       const VerifyOptions& options = {});

/// moment_zeta with 2l = Omega / ln^k T; reference Omega.
/// Requires 0 < Omega <= 0.01 T ln^{k-1} T.
[[nodiscard]] MomentReport corollary_46(double T, int k, double omega, const Ladder& ladder,
                                        const VerifyOptions& options = {});

}  // namespace zeta_ladder
