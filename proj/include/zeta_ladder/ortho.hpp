#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "zeta_ladder/ladder.hpp"

namespace zeta_ladder {

enum class SystemKind { fourier, jacobi, bessel, custom };

[[nodiscard]] const char* to_string(SystemKind kind) noexcept;

/// Exact squared norms A_n of consecutive members, starting at first_index.
struct NormTable {
    int first_index = 0;
    std::vector<double> A;
};

/// An L2-orthogonal family f_n on [0, 2l].
///
/// Indexing:
///   fourier  n = 0 is 1, n = 2j-1 is cos(j pi t / l), n = 2j is sin(j pi t / l)
///   jacobi   n >= 0, sqrt((1-u)^a (1+u)^b) P_n^(a,b)(u) with u = t - 1, l = 1
///   bessel   m >= 1, sqrt(t) J_order(mu_m t / 2l), mu_m the m-th zero of J_order
///   custom   first_index .. first_index + norms.size() - 1
class BaseSystem {
public:
    using Family = std::function<double(int n, double t)>;

    [[nodiscard]] static BaseSystem fourier(double l);
    [[nodiscard]] static BaseSystem jacobi(double alpha, double beta);
    [[nodiscard]] static BaseSystem bessel(int order, double l);
    /// The family is trusted for evaluation; orthogonality against the
    /// supplied norms is checked when the system is lifted.
    [[nodiscard]] static BaseSystem custom(double l, Family family, std::vector<double> norms, int first_index = 0);

    [[nodiscard]] SystemKind kind() const noexcept { return kind_; }
    [[nodiscard]] double l() const noexcept { return l_; }
    [[nodiscard]] double length() const noexcept { return 2.0 * l_; }
    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] double beta() const noexcept { return beta_; }
    [[nodiscard]] int order() const noexcept { return order_; }
    [[nodiscard]] int first_index() const noexcept { return first_; }
    /// Largest valid index.
    [[nodiscard]] int last_index() const noexcept { return last_; }
    [[nodiscard]] std::string describe() const;

    /// True when f_n has an integrable singularity at an endpoint of [0, 2l].
    [[nodiscard]] bool singular_endpoints() const noexcept;

    /// f_n(t). Throws Error(domain) for t outside [0, 2l] or an invalid index,
    /// Error(singular_point) at a singular Jacobi endpoint.
    [[nodiscard]] double eval(int n, double t) const;

    /// Closed-form A_n.
    [[nodiscard]] double norm(int n) const;

    /// A_n for the first count members.
    [[nodiscard]] NormTable norms(int count) const;

    /// m-th zero used by the bessel system.
    [[nodiscard]] double bessel_root(int m) const;

private:
    BaseSystem() = default;
    void check_index(int n) const;

    SystemKind kind_ = SystemKind::fourier;
    double l_ = 1.0;
    double alpha_ = 0.0;
    double beta_ = 0.0;
    int order_ = 0;
    int first_ = 0;
    int last_ = 0;
    std::vector<double> roots_;
    std::shared_ptr<const Family> family_;
    std::vector<double> custom_norms_;
};

/// Argument of the lifted Jacobi members: pullback uses phi1^k(t) - T - 1,
/// literal uses t - T - 1 (kept only for comparison).
enum class JacobiArgument { pullback, literal };

/// Forward orbit of one abscissa, computed with k ladder solves.
struct Orbit {
    std::vector<double> points;  // phi1^0(t) .. phi1^k(t)
    std::vector<double> z;       // Z(phi1^r(t)), r < k
    std::vector<double> omega;   // omega(phi1^r(t)), r < k
    std::vector<double> prime;   // phi1'(phi1^r(t)), r < k
    double weight_sq = 1.0;      // prod_r phi1'(phi1^r(t))
    double argument = 0.0;       // base-system argument, clamped into [0, 2l]
    /// t - T^k when the caller integrates in that offset (exact near the
    /// segment start, unlike t itself); NaN otherwise.
    double offset = std::numeric_limits<double>::quiet_NaN();
};

/// phi1^0(t) .. phi1^k(t) with the per-level Z, omega and phi1'.
/// Leaves Orbit::argument unset.
[[nodiscard]] Orbit forward_orbit(const Ladder& ladder, double t, int k);

/// The zeta-weighted family F_n(t; T, k, l) on [T^k, (T+2l)^k].
class LiftedSystem {
public:
    /// Max tolerated excursion of phi1^k(t) - T outside [0, 2l] before a
    /// consistency error is raised; smaller excursions are clamped.
    static constexpr double kDriftTolerance = 1e-6;

    /// Builds the reverse segment with H = 2l. Custom bases are checked for
    /// orthogonality on [0, 2l] first.
    LiftedSystem(BaseSystem base, double T, int k, Ladder ladder,
                 JacobiArgument argument = JacobiArgument::pullback);

    [[nodiscard]] const BaseSystem& base() const noexcept { return base_; }
    [[nodiscard]] const Ladder& ladder() const noexcept { return ladder_; }
    [[nodiscard]] const IterSeq& seq() const noexcept { return seq_; }
    [[nodiscard]] double T() const noexcept { return seq_.T; }
    [[nodiscard]] int k() const noexcept { return seq_.k; }
    [[nodiscard]] double lo() const noexcept { return seq_.lows.back(); }
    [[nodiscard]] double hi() const noexcept { return seq_.highs.back(); }
    [[nodiscard]] JacobiArgument jacobi_argument() const noexcept { return argument_; }

    [[nodiscard]] Orbit orbit(double t) const;

    /// Sets o.argument from the orbit's endpoint, checking drift.
    void settle(Orbit& o) const;

    /// f_n at the orbit's argument times prod sqrt(phi1'), i.e. prod |Z~|.
    [[nodiscard]] double member(int n, const Orbit& o) const;

    [[nodiscard]] double eval(int n, double t) const;

    /// Same member written as f_n * prod |zeta| / sqrt(omega).
    [[nodiscard]] double eval_zeta_form(int n, double t) const;

private:
    BaseSystem base_;
    Ladder ladder_;
    IterSeq seq_;
    JacobiArgument argument_;
    // phi1^k at the segment ends minus T and T + 2l; removed from the
    // argument so the ends land on 0 and 2l exactly
    double end_error_lo_ = 0.0;
    double end_error_hi_ = 0.0;
};

/// Gram matrix of the base system on [0, 2l] by adaptive quadrature, used to
/// vet custom systems. Returns the largest relative defect
/// max(|G_mn| / sqrt(A_m A_n), |G_nn / A_n - 1|).
[[nodiscard]] double base_orthogonality_defect(const BaseSystem& base, int count, double tol);

}  // namespace zeta_ladder
