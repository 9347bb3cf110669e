#include "zeta_ladder/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>

#include "zeta_ladder/error.hpp"
#include "zeta_ladder/zeta.hpp"

namespace zeta_ladder {

namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);
constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string num(double x) {
    std::ostringstream s;
    s.precision(17);
    s << x;
    return s.str();
}

// Re-throws e with its kind preserved and a context prefix.
[[noreturn]] void rethrow_with(const std::string& prefix) {
    try {
        throw;
    } catch (const CacheExhaustedError& e) {
        throw CacheExhaustedError(e.required_t_max(), prefix + e.what());
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(e.last_iterate(), e.bracket_lo(), e.bracket_hi(), prefix + e.what());
    } catch (const Error& e) {
        throw Error(e.kind(), prefix + e.what());
    }
}

}  // namespace

void validate(const LadderConfig& cfg) {
    if (!(cfg.tol_root > 0.0)) throw Error(ErrorKind::domain, "LadderConfig: tol_root must be > 0");
    if (cfg.max_iter < 1) throw Error(ErrorKind::domain, "LadderConfig: max_iter must be >= 1");
    if (!(cfg.t_lo >= 100.0)) throw Error(ErrorKind::domain, "LadderConfig: T_lo must be >= 100");
    if (cfg.k_max < 1) throw Error(ErrorKind::domain, "LadderConfig: k_max must be >= 1");
    if (!std::isfinite(cfg.euler_gamma) || !std::isfinite(cfg.c0)) {
        throw Error(ErrorKind::domain, "LadderConfig: constants must be finite");
    }
}

double hl_asymptotic(double V, const LadderConfig& cfg) {
    if (!(V > 0.0) || !std::isfinite(V)) throw Error(ErrorKind::domain, "hl_asymptotic: V must be > 0");
    return V * std::log(V) + (cfg.euler_gamma - kLog2Pi) * V + cfg.c0;
}

double hl_asymptotic_slope(double V, const LadderConfig& cfg) {
    if (!(V > 0.0) || !std::isfinite(V)) throw Error(ErrorKind::domain, "hl_asymptotic_slope: V must be > 0");
    return std::log(V) + 1.0 + cfg.euler_gamma - kLog2Pi;
}

Ladder::Ladder(std::shared_ptr<const CumulativeCache> cache, LadderConfig cfg)
    : cache_(std::move(cache)), cfg_(cfg) {
    if (!cache_) throw Error(ErrorKind::domain, "Ladder: cache is required");
    validate(cfg_);
}

void Ladder::require_admissible(double T, const char* op) const {
    if (!std::isfinite(T)) throw Error(ErrorKind::domain, std::string(op) + ": T must be finite");
    if (T < cfg_.t_lo) {
        throw Error(ErrorKind::domain, std::string(op) + ": T = " + num(T) + " below T_lo = " + num(cfg_.t_lo));
    }
    if (T > cache_->t_max()) {
        throw CacheExhaustedError(T, std::string(op) + ": T = " + num(T) + " exceeds cache t_max = " +
                                         num(cache_->t_max()) + "; rebuild with tmax >= " + num(T));
    }
}

LadderPoint Ladder::solve(double T, double target) const {
    // hl_asymptotic is convex with its minimum at V_min; the admissible root is
    // the one on the increasing branch.
    const double v_min = std::exp(kLog2Pi - cfg_.euler_gamma - 1.0);
    const double floor_value = hl_asymptotic(v_min, cfg_);
    if (!(target > floor_value)) {
        throw Error(ErrorKind::below_threshold, "phi1: integral " + num(target) + " at T = " + num(T) +
                                                    " does not exceed the ladder equation minimum " +
                                                    num(floor_value));
    }
    double lo = v_min;
    double hi = std::max(T, 2.0 * v_min);
    for (int i = 0; hl_asymptotic(hi, cfg_) < target; ++i) {
        if (i > 200) throw Error(ErrorKind::root, "phi1: failed to bracket root at T = " + num(T));
        lo = hi;
        hi *= 2.0;
    }
    double v = T - (1.0 - cfg_.euler_gamma) * T / std::log(T);
    if (!(v > lo && v < hi)) v = 0.5 * (lo + hi);

    for (int iter = 0; iter < cfg_.max_iter; ++iter) {
        const double res = hl_asymptotic(v, cfg_) - target;
        if (res == 0.0) break;
        if (res > 0.0) {
            hi = v;
        } else {
            lo = v;
        }
        double next = v - res / hl_asymptotic_slope(v, cfg_);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - v) <= 4.0 * kEps * v) {
            v = next;
            break;
        }
        v = next;
        if (iter + 1 == cfg_.max_iter) {
            throw ConvergenceError(v, lo, hi, "phi1: iteration cap reached at T = " + num(T));
        }
    }
    const double residual = hl_asymptotic(v, cfg_) - target;
    if (std::abs(residual) > cfg_.tol_root) {
        throw ConvergenceError(v, lo, hi,
                               "phi1: residual " + num(residual) + " above tol_root at T = " + num(T));
    }
    return LadderPoint{T, v, residual};
}

LadderPoint Ladder::phi1(double T) const {
    require_admissible(T, "phi1");
    return solve(T, hl_integral(T, *cache_));
}

LadderSample Ladder::sample(double T) const {
    LadderSample s;
    s.point = phi1(T);
    s.z = hardy_z(T).z;
    s.omega = std::log(s.point.phi1) + 1.0 + cfg_.euler_gamma - kLog2Pi;
    s.prime = s.z * s.z / s.omega;
    return s;
}

double Ladder::phi1_prime(double T) const { return sample(T).prime; }

double Ladder::omega(double T) const {
    return std::log(phi1(T).phi1) + 1.0 + cfg_.euler_gamma - kLog2Pi;
}

double Ladder::phi1_inverse(double U) const {
    if (!std::isfinite(U)) throw Error(ErrorKind::domain, "phi1_inverse: U must be finite");
    if (U < cfg_.t_lo) {
        throw Error(ErrorKind::domain, "phi1_inverse: U = " + num(U) + " below T_lo = " + num(cfg_.t_lo));
    }
    const double t_max = cache_->t_max();
    const double c = cfg_.euler_gamma;
    const double estimate = U + (1.0 - c) * U / (std::log(U) + 1.0 + c - kLog2Pi);
    auto g = [&](double x) { return phi1(x).phi1 - U; };

    if (U > t_max) {
        throw CacheExhaustedError(estimate, "phi1_inverse: U = " + num(U) + " beyond cache t_max = " + num(t_max) +
                                                "; rebuild with tmax >= " + num(estimate));
    }
    double lo = U;
    double g_lo = g(lo);
    if (g_lo >= 0.0) {
        if (g_lo == 0.0) return lo;
        throw Error(ErrorKind::root, "phi1_inverse: phi1(U) >= U at U = " + num(U) + "; no root above U");
    }

    const double reach = estimate - U;
    double hi = std::min(estimate + std::max(1.0, 0.02 * reach), t_max);
    double g_hi = g(hi);
    while (g_hi <= 0.0) {
        if (hi >= t_max) {
            const double need = U + 2.0 * (hi - U);
            throw CacheExhaustedError(need, "phi1_inverse: root for U = " + num(U) + " lies beyond cache t_max = " +
                                                num(t_max) + "; rebuild with tmax >= " + num(need));
        }
        lo = hi;
        g_lo = g_hi;
        hi = std::min(U + 2.0 * (hi - U), t_max);
        g_hi = g(hi);
    }

    double x = (estimate > lo && estimate < hi) ? estimate : 0.5 * (lo + hi);
    double best_x = std::abs(g_lo) < std::abs(g_hi) ? lo : hi;
    double best_g = std::min(std::abs(g_lo), std::abs(g_hi));
    const double target = 0.01 * cfg_.tol_root;
    for (int iter = 0; iter < cfg_.max_iter; ++iter) {
        const LadderSample s = sample(x);
        const double gx = s.point.phi1 - U;
        if (std::abs(gx) < best_g) {
            best_g = std::abs(gx);
            best_x = x;
        }
        if (std::abs(gx) <= target) return x;
        if (gx < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        if (hi - lo <= 4.0 * kEps * hi) break;
        double next = s.prime > 0.0 ? x - gx / s.prime : 0.5 * (lo + hi);
        // Newton stalls on the flat spots phi1' = 0 at zeros of Z; bisect there.
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        x = next;
    }
    if (best_g <= cfg_.tol_root) return best_x;
    throw ConvergenceError(best_x, lo, hi,
                           "phi1_inverse: no convergence for U = " + num(U) + " in [" + num(lo) + ", " + num(hi) + "]");
}

IterSeq Ladder::reverse_iterate(double T, double H, int k) const {
    if (!std::isfinite(T) || T < cfg_.t_lo) {
        throw Error(ErrorKind::domain, "reverse_iterate: T must be >= T_lo = " + num(cfg_.t_lo));
    }
    if (!(H > 0.0) || !std::isfinite(H)) throw Error(ErrorKind::domain, "reverse_iterate: H must be > 0");
    if (k < 0 || k > cfg_.k_max) {
        throw Error(ErrorKind::domain, "reverse_iterate: k must be in [0, " + std::to_string(cfg_.k_max) + "]");
    }
    IterSeq seq;
    seq.T = T;
    seq.H = H;
    seq.k = k;
    seq.lows.push_back(T);
    seq.highs.push_back(T + H);
    seq.low_residuals.push_back(0.0);
    seq.high_residuals.push_back(0.0);
    for (int r = 1; r <= k; ++r) {
        try {
            const double low = phi1_inverse(seq.lows.back());
            const double high = phi1_inverse(seq.highs.back());
            seq.low_residuals.push_back(phi1(low).phi1 - seq.lows.back());
            seq.high_residuals.push_back(phi1(high).phi1 - seq.highs.back());
            seq.lows.push_back(low);
            seq.highs.push_back(high);
        } catch (const Error&) {
            rethrow_with("reverse_iterate r=" + std::to_string(r) + ": ");
        }
    }
    return seq;
}

double Ladder::forward_iterate(double t, int r) const {
    if (r < 0) throw Error(ErrorKind::domain, "forward_iterate: r must be >= 0");
    double x = t;
    for (int step = 1; step <= r; ++step) {
        if (x < cfg_.t_lo) {
            throw Error(ErrorKind::domain, "forward_iterate: step " + std::to_string(step) + " input " + num(x) +
                                               " below T_lo = " + num(cfg_.t_lo));
        }
        try {
            x = phi1(x).phi1;
        } catch (const Error&) {
            rethrow_with("forward_iterate step " + std::to_string(step) + ": ");
        }
    }
    return x;
}

std::vector<double> Ladder::orbit(double t, int k) const {
    if (k < 0) throw Error(ErrorKind::domain, "orbit: k must be >= 0");
    std::vector<double> out{t};
    for (int r = 1; r <= k; ++r) out.push_back(forward_iterate(out.back(), 1));
    return out;
}

GapReport gap_stats(const IterSeq& seq, const LadderConfig& cfg) {
    const auto n = static_cast<std::size_t>(seq.k) + 1;
    if (seq.k < 0 || seq.lows.size() != n || seq.highs.size() != n) {
        throw Error(ErrorKind::domain, "gap_stats: malformed IterSeq");
    }
    if (!(seq.T > 1.0)) throw Error(ErrorKind::domain, "gap_stats: T must exceed 1");
    GapReport rep;
    rep.T = seq.T;
    rep.H = seq.H;
    rep.k = seq.k;
    rep.scale = (1.0 - cfg.euler_gamma) * seq.T / std::log(seq.T);
    for (std::size_t r = 0; r < n; ++r) {
        GapRow row;
        row.r = static_cast<int>(r);
        row.low = seq.lows[r];
        row.high = seq.highs[r];
        row.length = row.high - row.low;
        if (!(row.high > row.low)) rep.ordered = false;
        if (r > 0) {
            row.gap = seq.lows[r] - seq.highs[r - 1];
            row.gap_ratio = *row.gap / rep.scale;
            if (!(seq.lows[r] > seq.lows[r - 1]) || !(seq.highs[r] > seq.highs[r - 1])) rep.ordered = false;
            if (!(*row.gap > 0.0)) rep.disjoint = false;
        }
        if (r + 1 < n) row.precedes_next = seq.highs[r] < seq.lows[r + 1];
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace zeta_ladder
