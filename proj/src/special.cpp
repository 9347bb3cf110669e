#include "zeta_ladder/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "zeta_ladder/error.hpp"

namespace zeta_ladder::special {

namespace {

// B_{2k} / (2k (2k-1)) for k = 1..8
constexpr std::array<double, 8> kStirling = {
    1.0 / 12.0,         -1.0 / 360.0,       1.0 / 1260.0,
    -1.0 / 1680.0,      1.0 / 1188.0,       -691.0 / 360360.0,
    1.0 / 156.0,        -3617.0 / 122400.0,
};

constexpr double kStirlingMinModulus = 15.0;

double bessel_series(int n, double x) {
    const double half = 0.5 * x;
    const double q = -half * half;
    double term = 1.0;
    for (int i = 1; i <= n; ++i) term *= half / i;
    double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<double>(k) * (k + n));
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

// Miller's backward recurrence normalised by J_0 + 2 sum J_{2k} = 1.
double bessel_miller(int n, double x) {
    const double top = std::max(static_cast<double>(n), x);
    int start = static_cast<int>(top + 30.0 + std::sqrt(60.0 * top));
    start += start % 2;
    double next = 0.0;
    double cur = 1e-300;
    double norm = 0.0;
    double result = 0.0;
    for (int j = start; j > 0; --j) {
        const double prev = (2.0 * j / x) * cur - next;
        next = cur;
        cur = prev;
        if (std::abs(cur) > 1e250) {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            result *= 1e-250;
        }
        if (j - 1 == n) result = cur;
        if ((j - 1) % 2 == 0 && j - 1 > 0) norm += 2.0 * cur;
    }
    norm += cur;  // J_0 term
    return result / norm;
}

}  // namespace

std::complex<double> log_gamma(std::complex<double> z) {
    if (!(z.real() > 0.0)) {
        throw Error(ErrorKind::domain, "log_gamma requires Re z > 0");
    }
    std::complex<double> shift_sum{0.0, 0.0};
    while (std::abs(z) < kStirlingMinModulus) {
        shift_sum += std::log(z);
        z += 1.0;
    }
    const std::complex<double> inv = 1.0 / z;
    const std::complex<double> inv2 = inv * inv;
    std::complex<double> series{0.0, 0.0};
    std::complex<double> power = inv;
    for (double c : kStirling) {
        series += c * power;
        power *= inv2;
    }
    const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
    return (z - 0.5) * std::log(z) - z + half_log_2pi + series - shift_sum;
}

double bessel_j(int n, double x) {
    if (n < 0) throw Error(ErrorKind::domain, "bessel_j: order must be >= 0");
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw Error(ErrorKind::domain, "bessel_j: argument must be finite and >= 0");
    }
    if (x == 0.0) return n == 0 ? 1.0 : 0.0;
    if (x < 5.0) return bessel_series(n, x);
    return bessel_miller(n, x);
}

double bessel_j_prime(int n, double x) {
    if (n == 0) return -bessel_j(1, x);
    return 0.5 * (bessel_j(n - 1, x) - bessel_j(n + 1, x));
}

double bessel_zero(int n, int m) {
    if (n < 0 || n > 100) throw Error(ErrorKind::domain, "bessel_zero: order must be in [0, 100]");
    if (m < 1 || m > kBesselMaxZeroIndex) {
        throw Error(ErrorKind::domain,
                    "bessel_zero: index must be in [1, " + std::to_string(kBesselMaxZeroIndex) + "]");
    }
    // McMahon's expansion
    const double mu = 4.0 * n * n;
    const double beta = (m + 0.5 * n - 0.25) * std::numbers::pi;
    const double e = 8.0 * beta;
    const double guess = beta - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e * e);

    // Zeros of J_n exceed n and are spaced by more than 2.4, so a 0.25 scan
    // starting below the first zero sees every sign change.
    constexpr double kScan = 0.25;
    double a = n > 0 ? static_cast<double>(n) : kScan;
    double fa = bessel_j(n, a);
    int found = 0;
    double lo = 0.0;
    double hi = 0.0;
    for (int step = 0; step < 100000; ++step) {
        const double b = a + kScan;
        const double fb = bessel_j(n, b);
        if (fb == 0.0) {
            if (++found == m) return b;
        } else if ((fa < 0.0) != (fb < 0.0) && fa != 0.0) {
            if (++found == m) {
                lo = a;
                hi = b;
                break;
            }
        }
        a = b;
        fa = fb;
    }
    if (found < m) throw Error(ErrorKind::root, "bessel_zero: failed to bracket root");

    double f_lo = bessel_j(n, lo);
    double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
    for (int iter = 0; iter < 100; ++iter) {
        const double fx = bessel_j(n, x);
        if (fx == 0.0) return x;
        if ((fx < 0.0) == (f_lo < 0.0)) {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
        }
        const double d = bessel_j_prime(n, x);
        double next = d != 0.0 ? x - fx / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-15 * x) return next;
        x = next;
    }
    if (hi - lo > 1e-10) throw Error(ErrorKind::root, "bessel_zero: refinement did not converge");
    return 0.5 * (lo + hi);
}

double jacobi_p(int n, double alpha, double beta, double u) {
    if (n < 0) throw Error(ErrorKind::domain, "jacobi_p: degree must be >= 0");
    if (n == 0) return 1.0;
    const double ab = alpha + beta;
    double p_prev = 1.0;
    double p = (alpha + 1.0) + (ab + 2.0) * (u - 1.0) / 2.0;
    for (int k = 2; k <= n; ++k) {
        const double two_k_ab = 2.0 * k + ab;
        const double a1 = 2.0 * k * (k + ab) * (two_k_ab - 2.0);
        const double a2 = (two_k_ab - 1.0) * (alpha * alpha - beta * beta);
        const double a3 = (two_k_ab - 1.0) * two_k_ab * (two_k_ab - 2.0);
        const double a4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * two_k_ab;
        const double next = ((a2 + a3 * u) * p - a4 * p_prev) / a1;
        p_prev = p;
        p = next;
    }
    return p;
}

double jacobi_norm(int n, double alpha, double beta) {
    if (n < 0) throw Error(ErrorKind::domain, "jacobi_norm: degree must be >= 0");
    if (!(alpha > -1.0) || !(beta > -1.0)) {
        throw Error(ErrorKind::domain, "jacobi_norm: requires alpha > -1 and beta > -1");
    }
    const double ab = alpha + beta;
    if (n == 0) {
        return std::exp((ab + 1.0) * std::numbers::ln2 + std::lgamma(alpha + 1.0) +
                        std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
    }
    // Gamma(n+a+b+1) = Gamma(n+a+b+2) / (n+a+b+1) keeps the n >= 1 case finite
    const double log_ratio = (ab + 1.0) * std::numbers::ln2 + std::lgamma(n + alpha + 1.0) +
                             std::lgamma(n + beta + 1.0) - std::lgamma(n + 1.0) -
                             std::lgamma(n + ab + 2.0);
    return std::exp(log_ratio) * (n + ab + 1.0) / (2.0 * n + ab + 1.0);
}

}  // namespace zeta_ladder::special
