#pragma once

#include <complex>

namespace zeta_ladder::special {

/// Principal-branch-continuous ln Gamma(z) for Re z > 0.
[[nodiscard]] std::complex<double> log_gamma(std::complex<double> z);

/// Bessel function of the first kind J_n(x), x >= 0.
/// Ascending series for small x, Miller backward recurrence above.
[[nodiscard]] double bessel_j(int n, double x);

/// dJ_n/dx.
[[nodiscard]] double bessel_j_prime(int n, double x);

/// m-th positive zero of J_n (m >= 1), absolute accuracy 1e-10.
[[nodiscard]] double bessel_zero(int n, int m);

/// Jacobi polynomial P_n^{(alpha,beta)}(u) by three-term recurrence.
[[nodiscard]] double jacobi_p(int n, double alpha, double beta, double u);

/// Closed-form squared norm of P_n^{(alpha,beta)} under (1-u)^alpha (1+u)^beta on [-1,1].
[[nodiscard]] double jacobi_norm(int n, double alpha, double beta);

inline constexpr int kBesselMaxZeroIndex = 20;

}  // namespace zeta_ladder::special
