#pragma once

#include <stdexcept>
#include <string>

namespace zeta_ladder {

/// Failure categories. The CLI maps these onto its exit-code contract.
enum class ErrorKind {
    domain,           // argument outside an operation's precondition
    cache_exhausted,  // request beyond the cumulative cache coverage
    below_threshold,  // ladder equation has no admissible root
    convergence,      // iterative solver hit its iteration cap
    accuracy,         // quadrature panel budget exhausted
    evaluation,       // non-finite integrand sample
    singular_point,   // evaluation at an integrable endpoint singularity
    consistency,      // orbit drifted outside the base interval
    root,             // failed to bracket a root
    storage,          // cache file I/O
    checksum,         // cache file corrupted
};

[[nodiscard]] const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Thrown when a computation needs the cumulative integral beyond the cache.
class CacheExhaustedError : public Error {
public:
    CacheExhaustedError(double required_t_max, const std::string& what)
        : Error(ErrorKind::cache_exhausted, what), required_(required_t_max) {}

    /// Smallest cache t_max that would have satisfied the request.
    [[nodiscard]] double required_t_max() const noexcept { return required_; }

private:
    double required_;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(double last_iterate, double lo, double hi, const std::string& what)
        : Error(ErrorKind::convergence, what), last_(last_iterate), lo_(lo), hi_(hi) {}

    [[nodiscard]] double last_iterate() const noexcept { return last_; }
    [[nodiscard]] double bracket_lo() const noexcept { return lo_; }
    [[nodiscard]] double bracket_hi() const noexcept { return hi_; }

private:
    double last_;
    double lo_;
    double hi_;
};

class QuadratureError : public Error {
public:
    QuadratureError(ErrorKind kind, double best_estimate, double abscissa, const std::string& what)
        : Error(kind, what), best_(best_estimate), abscissa_(abscissa) {}

    [[nodiscard]] double best_estimate() const noexcept { return best_; }
    /// Offending abscissa for evaluation errors, NaN otherwise.
    [[nodiscard]] double abscissa() const noexcept { return abscissa_; }

private:
    double best_;
    double abscissa_;
};

}  // namespace zeta_ladder
