#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <string>

#include "zeta_ladder/cache.hpp"

namespace zl_test {

// Deterministic generator for property checks; every suite seeds its own.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

private:
    std::mt19937_64 rng_;
};

inline double rel_err(double got, double want) {
    return want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
}

// Shared cache built by the ctest fixture (tmax 125000, step 0.25, tol 1e-10).
inline std::shared_ptr<const zeta_ladder::CumulativeCache> shared_cache() {
    static const auto cache =
        std::make_shared<const zeta_ladder::CumulativeCache>(zeta_ladder::load_cache(ZL_TEST_CACHE));
    return cache;
}

}  // namespace zl_test
