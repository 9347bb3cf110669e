#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace zeta_ladder {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
    int panels = 0;
};

/// Multi-component result of integrate_batch.
struct VectorQuadResult {
    std::vector<double> values;
    std::vector<double> error_estimates;
    long evaluations = 0;
    int panels = 0;
    bool converged = true;
};

/// Evaluates a dim-component integrand at every abscissa in x; out is laid
/// out row-major, out[i * dim + j] = f_j(x[i]).
using BatchIntegrand = std::function<void(std::span<const double> x, std::span<double> out)>;

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

struct QuadOptions {
    /// Success when every component satisfies err_j <= tol * max(1, |I_j|).
    double tol = 1e-8;
    int max_panels = 20000;
    /// Interior points where the initial partition is split.
    std::vector<double> breakpoints;
    /// Uniform subdivision of each initial piece.
    int initial_panels = 1;
    /// When false, budget exhaustion is reported through converged=false
    /// instead of a QuadratureError.
    bool throw_on_budget = true;
    ProgressFn progress;
};

/// Globally adaptive Gauss-Kronrod (G7/K15) quadrature. Worst panel first.
/// Throws QuadratureError(accuracy) when the panel budget runs out and
/// QuadratureError(evaluation) on a non-finite sample.
[[nodiscard]] QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                                   double tol);

[[nodiscard]] QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                                   const QuadOptions& options);

[[nodiscard]] VectorQuadResult integrate_batch(const BatchIntegrand& f, std::size_t dim, double a,
                                               double b, const QuadOptions& options);

}  // namespace zeta_ladder
