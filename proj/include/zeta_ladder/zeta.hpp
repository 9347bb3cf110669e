#pragma once

#include <complex>

namespace zeta_ladder {

/// Below this ordinate theta uses the shifted Stirling log-Gamma series,
/// above it the asymptotic expansion.
inline constexpr double kThetaSwitch = 30.0;

/// Below this ordinate Z uses the accelerated eta series, above it the
/// Riemann-Siegel formula with remainder terms C0..C4.
inline constexpr double kRiemannSiegelSwitch = 600.0;

struct ZValue {
    double t = 0.0;
    double z = 0.0;            // signed Hardy Z(t)
    double abs_zeta_sq = 0.0;  // |zeta(1/2 + it)|^2 == z*z
};

/// Riemann-Siegel theta, theta(t) = -(t/2) ln(pi) + Im lnGamma(1/4 + it/2).
[[nodiscard]] double theta(double t);

/// Hardy Z-function on the critical line, dispatching on kRiemannSiegelSwitch.
[[nodiscard]] ZValue hardy_z(double t);

/// Z(t) from the alternating eta series with Borwein acceleration.
/// Valid for any t >= 0; cost grows linearly in t.
[[nodiscard]] double hardy_z_eta(double t);

/// Z(t) from the Riemann-Siegel main sum plus C0..C4 corrections.
/// Requires t >= 2*pi (at least one main-sum term).
[[nodiscard]] double hardy_z_riemann_siegel(double t);

/// zeta(1/2 + it) via the eta series (used by hardy_z_eta).
[[nodiscard]] std::complex<double> zeta_critical_eta(double t);

}  // namespace zeta_ladder
