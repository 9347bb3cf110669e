#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "zeta_ladder/cache.hpp"

namespace zeta_ladder {

struct LadderConfig {
    double euler_gamma = 0.57721566490153286;  // c
    double c0 = 0.0;                           // additive constant of the ladder equation
    double tol_root = 1e-8;
    int max_iter = 200;
    double t_lo = 100.0;  // smallest admissible T
    int k_max = 8;
};

/// Throws Error(domain) unless tol_root > 0, max_iter >= 1, t_lo >= 100, k_max >= 1.
void validate(const LadderConfig& cfg);

/// V ln V + (c - ln 2 pi) V + c0.
[[nodiscard]] double hl_asymptotic(double V, const LadderConfig& cfg);

/// d/dV of hl_asymptotic: ln V + 1 + c - ln 2 pi.
[[nodiscard]] double hl_asymptotic_slope(double V, const LadderConfig& cfg);

struct LadderPoint {
    double T = 0.0;
    double phi1 = 0.0;
    double residual = 0.0;  // hl_asymptotic(phi1) - hl_integral(T)
};

/// Everything the ladder knows at one ordinate, from a single solve.
struct LadderSample {
    LadderPoint point;
    double z = 0.0;      // Hardy Z(T)
    double omega = 0.0;  // ln phi1 + 1 + c - ln 2 pi
    double prime = 0.0;  // Z^2 / omega
};

/// Endpoint sequences of the reverse iterations of [T, T+H].
struct IterSeq {
    double T = 0.0;
    double H = 0.0;
    int k = 0;
    std::vector<double> lows;   // T^0 .. T^k
    std::vector<double> highs;  // (T+H)^0 .. (T+H)^k
    std::vector<double> low_residuals;
    std::vector<double> high_residuals;
};

/// phi1 realised by solving hl_asymptotic(V) = hl_integral(T).
/// Value type: copies share the immutable cache.
class Ladder {
public:
    explicit Ladder(std::shared_ptr<const CumulativeCache> cache, LadderConfig cfg = {});

    [[nodiscard]] const LadderConfig& config() const noexcept { return cfg_; }
    [[nodiscard]] const CumulativeCache& cache() const noexcept { return *cache_; }
    [[nodiscard]] std::shared_ptr<const CumulativeCache> cache_ptr() const noexcept { return cache_; }

    [[nodiscard]] LadderPoint phi1(double T) const;
    [[nodiscard]] LadderSample sample(double T) const;

    /// Exact derivative of the implemented phi1: Z^2(T) / omega(T).
    [[nodiscard]] double phi1_prime(double T) const;
    [[nodiscard]] double omega(double T) const;

    /// x with phi1(x) = U, by Newton on phi1(x) - U with bisection fallback.
    [[nodiscard]] double phi1_inverse(double U) const;

    /// k-fold reverse iteration of both endpoints of [T, T+H].
    [[nodiscard]] IterSeq reverse_iterate(double T, double H, int k) const;

    /// r-fold composition of phi1, r = 0 is the identity.
    [[nodiscard]] double forward_iterate(double t, int r) const;

    /// phi1^0(t) .. phi1^k(t).
    [[nodiscard]] std::vector<double> orbit(double t, int k) const;

private:
    void require_admissible(double T, const char* op) const;
    [[nodiscard]] LadderPoint solve(double T, double target) const;

    std::shared_ptr<const CumulativeCache> cache_;
    LadderConfig cfg_;
};

struct GapRow {
    int r = 0;
    double low = 0.0;
    double high = 0.0;
    double length = 0.0;              // high - low
    std::optional<double> gap;        // low_r - high_{r-1}
    std::optional<double> gap_ratio;  // gap / ((1-c) T / ln T)
    bool precedes_next = true;        // [low_r, high_r] lies strictly left of the next segment
};

struct GapReport {
    double T = 0.0;
    double H = 0.0;
    int k = 0;
    double scale = 0.0;  // (1-c) T / ln T
    std::vector<GapRow> rows;
    bool ordered = true;   // lows and highs strictly increasing, high_r > low_r
    bool disjoint = true;  // every gap > 0
};

[[nodiscard]] GapReport gap_stats(const IterSeq& seq, const LadderConfig& cfg);

}  // namespace zeta_ladder
