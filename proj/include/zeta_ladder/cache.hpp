#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "zeta_ladder/quadrature.hpp"

namespace zeta_ladder {

/// Monotone grid of (t_i, I_i), t_i = i * step, I_i = integral_0^{t_i} Z(u)^2 du.
/// Immutable once constructed.
class CumulativeCache {
public:
    static constexpr int kVersion = 1;

    /// Validates t_i spacing implicitly (t_i is derived) and strict monotonicity of I.
    CumulativeCache(double step, std::vector<double> integrals);

    [[nodiscard]] double step() const noexcept { return step_; }
    [[nodiscard]] double t_max() const noexcept { return t_at(integrals_.size() - 1); }
    [[nodiscard]] std::size_t size() const noexcept { return integrals_.size(); }
    [[nodiscard]] double t_at(std::size_t i) const noexcept { return static_cast<double>(i) * step_; }
    [[nodiscard]] double integral_at(std::size_t i) const { return integrals_.at(i); }
    [[nodiscard]] std::span<const double> integrals() const noexcept { return integrals_; }
    [[nodiscard]] int version() const noexcept { return kVersion; }

    /// FNV-1a 64 over the serialized data rows (the same bytes save_cache writes).
    [[nodiscard]] std::uint64_t checksum() const noexcept { return checksum_; }

    /// Largest i with t_i <= t. Requires 0 <= t <= t_max().
    [[nodiscard]] std::size_t index_below(double t) const noexcept;

    friend bool operator==(const CumulativeCache& x, const CumulativeCache& y) noexcept {
        return x.step_ == y.step_ && x.integrals_ == y.integrals_;
    }

private:
    double step_;
    std::vector<double> integrals_;
    std::uint64_t checksum_;
};

/// 17-significant-digit data row "t,I" as written to the cache file.
[[nodiscard]] std::string cache_row(double t, double integral);

/// Integrates Z^2 panel by panel (relative tolerance tol per panel) and
/// accumulates. The grid is extended to the first multiple of step >= t_max.
[[nodiscard]] CumulativeCache build_cache(double t_max, double step, double tol, unsigned threads = 0,
                                          const ProgressFn& progress = {});

/// Text format:
///   # zeta-ladder-cache v1 step=<s> tmax=<t>
///   t,I            (one row per grid point, 17 significant digits)
///   # end rows=<n> checksum=<16 hex digits>
void save_cache(const CumulativeCache& cache, const std::filesystem::path& path);

/// Throws Error(storage) on I/O or format errors and Error(checksum) when
/// the trailer does not match the rows.
[[nodiscard]] CumulativeCache load_cache(const std::filesystem::path& path);

/// integral_0^T Z^2: cached value at the grid point below T plus a tail over
/// the final partial panel. Throws CacheExhaustedError when T > t_max.
[[nodiscard]] double hl_integral(double T, const CumulativeCache& cache);

}  // namespace zeta_ladder
