#include "zeta_ladder/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "zeta_ladder/error.hpp"
#include "zeta_ladder/special.hpp"

namespace zeta_ladder {

namespace {

#include "rs_coefficients.inc"

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_ordinate(double t, const char* op) {
    if (!std::isfinite(t) || t < 0.0) {
        throw Error(ErrorKind::domain, std::string(op) + ": ordinate must be finite and >= 0");
    }
}

template <std::size_t N>
double even_series(const double (&c)[N], double z2) {
    double acc = 0.0;
    for (std::size_t i = N; i-- > 0;) acc = acc * z2 + c[i];
    return acc;
}

// ln n and n^{-1/2} for the Riemann-Siegel main sum, covering t <= 1e8.
struct MainSumTable {
    static constexpr int kSize = 4000;
    std::vector<double> log_n;
    std::vector<double> inv_sqrt_n;

    MainSumTable() : log_n(kSize + 1), inv_sqrt_n(kSize + 1) {
        for (int n = 1; n <= kSize; ++n) {
            log_n[n] = std::log(static_cast<double>(n));
            inv_sqrt_n[n] = 1.0 / std::sqrt(static_cast<double>(n));
        }
    }
};

const MainSumTable& main_sum_table() {
    static const MainSumTable table;
    return table;
}

}  // namespace

double theta(double t) {
    require_ordinate(t, "theta");
    if (t < kThetaSwitch) {
        const auto lg = special::log_gamma({0.25, 0.5 * t});
        return -0.5 * t * std::log(kPi) + lg.imag();
    }
    const double inv = 1.0 / t;
    const double inv2 = inv * inv;
    return 0.5 * t * std::log(t / kTwoPi) - 0.5 * t - kPi / 8.0 +
           inv * (1.0 / 48.0 + inv2 * (7.0 / 5760.0 + inv2 * (31.0 / 80640.0)));
}

std::complex<double> zeta_critical_eta(double t) {
    require_ordinate(t, "zeta_critical_eta");
    // Borwein's algorithm 2: truncation error below
    // 3 (1 + 2t) e^{pi t} / (|Gamma(s)| (3 + sqrt 8)^n), |Gamma| ~ sqrt(2 pi) e^{-pi t / 2}.
    const double needed = kPi * t + std::log(3.0 * (1.0 + 2.0 * t)) + 40.0;
    const int n = static_cast<int>(std::ceil(needed / std::log(3.0 + std::sqrt(8.0)))) + 2;

    // d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!), accumulated in scaled form.
    std::vector<double> log_terms(n + 1);
    log_terms[0] = 0.0;
    for (int i = 1; i <= n; ++i) {
        const double ratio = 4.0 * (n + i - 1.0) * (n - i + 1.0) / ((2.0 * i) * (2.0 * i - 1.0));
        log_terms[i] = log_terms[i - 1] + std::log(ratio);
    }
    double top = log_terms[0];
    for (double v : log_terms) top = std::max(top, v);
    std::vector<double> cumulative(n + 1);
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        acc += std::exp(log_terms[i] - top);
        cumulative[i] = acc;
    }
    const double d_n = cumulative[n];

    std::complex<double> sum{0.0, 0.0};
    for (int k = 0; k < n; ++k) {
        const double weight = (d_n - cumulative[k]) / d_n;
        const double ln_k1 = std::log(k + 1.0);
        const std::complex<double> term = std::polar(std::exp(-0.5 * ln_k1), -t * ln_k1);
        sum += (k % 2 == 0 ? weight : -weight) * term;
    }
    // zeta = eta / (1 - 2^{1-s}), s = 1/2 + it
    const std::complex<double> two_pow = std::polar(std::sqrt(2.0), -t * std::numbers::ln2);
    return sum / (1.0 - two_pow);
}

double hardy_z_eta(double t) {
    const std::complex<double> zeta = zeta_critical_eta(t);
    const std::complex<double> rot = std::polar(1.0, theta(t));
    return (rot * zeta).real();
}

double hardy_z_riemann_siegel(double t) {
    require_ordinate(t, "hardy_z_riemann_siegel");
    if (t < kTwoPi) throw Error(ErrorKind::domain, "hardy_z_riemann_siegel: requires t >= 2 pi");
    const double tau = t / kTwoPi;
    const double a = std::sqrt(tau);
    const int n_terms = static_cast<int>(a);
    const double p = a - n_terms;
    const double th = theta(t);

    const auto& table = main_sum_table();
    double main = 0.0;
    if (n_terms <= MainSumTable::kSize) {
        for (int n = 1; n <= n_terms; ++n) main += table.inv_sqrt_n[n] * std::cos(th - t * table.log_n[n]);
    } else {
        for (int n = 1; n <= n_terms; ++n) {
            main += std::cos(th - t * std::log(static_cast<double>(n))) / std::sqrt(static_cast<double>(n));
        }
    }
    main *= 2.0;

    const double z = 2.0 * p - 1.0;
    const double z2 = z * z;
    const double c0 = even_series(kRsC0, z2);
    const double c1 = z * even_series(kRsC1, z2);
    const double c2 = even_series(kRsC2, z2);
    const double c3 = z * even_series(kRsC3, z2);
    const double c4 = even_series(kRsC4, z2);
    const double s = 1.0 / a;  // tau^{-1/2}
    const double corr = c0 + s * (c1 + s * (c2 + s * (c3 + s * c4)));
    const double sign = (n_terms % 2 == 1) ? 1.0 : -1.0;  // (-1)^{N-1}
    return main + sign * std::pow(tau, -0.25) * corr;
}

ZValue hardy_z(double t) {
    require_ordinate(t, "hardy_z");
    const double z = t >= kRiemannSiegelSwitch ? hardy_z_riemann_siegel(t) : hardy_z_eta(t);
    return ZValue{t, z, z * z};
}

}  // namespace zeta_ladder
