#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "support.hpp"
#include "zeta_ladder/error.hpp"
#include "zeta_ladder/ladder.hpp"
#include "zeta_ladder/zeta.hpp"

using namespace zeta_ladder;
using zl_test::rel_err;

namespace {

const Ladder& ladder() {
    static const Ladder l(zl_test::shared_cache());
    return l;
}

constexpr double kC = 0.57721566490153286;

double complement(double T) { return (1.0 - kC) * T / std::log(T); }

}  // namespace

TEST_CASE("config validation") {
    LadderConfig cfg;
    CHECK_NOTHROW(validate(cfg));
    cfg.tol_root = 0.0;
    CHECK_THROWS_AS(validate(cfg), Error);
    cfg = {};
    cfg.max_iter = 0;
    CHECK_THROWS_AS(validate(cfg), Error);
    cfg = {};
    cfg.t_lo = 50.0;
    CHECK_THROWS_AS(validate(cfg), Error);
    cfg = {};
    cfg.k_max = 0;
    CHECK_THROWS_AS(validate(cfg), Error);
    CHECK_THROWS_AS(Ladder(nullptr), Error);
}

TEST_CASE("hl_asymptotic and its slope") {
    const LadderConfig cfg;
    const double V = 12345.0;
    const double want = V * std::log(V) + (kC - std::log(2.0 * std::numbers::pi)) * V;
    CHECK(rel_err(hl_asymptotic(V, cfg), want) <= 1e-15);
    const double h = 1e-3;
    const double fd = (hl_asymptotic(V + h, cfg) - hl_asymptotic(V - h, cfg)) / (2 * h);
    CHECK(std::abs(hl_asymptotic_slope(V, cfg) - fd) <= 1e-8);
    CHECK_THROWS_AS((void)hl_asymptotic(0.0, cfg), Error);
    CHECK_THROWS_AS((void)hl_asymptotic_slope(-1.0, cfg), Error);
}

TEST_CASE("hl_asymptotic at V = 1 and V = e") {
    LadderConfig cfg;
    cfg.c0 = 0.75;
    const double k = kC - std::log(2.0 * std::numbers::pi);
    CHECK(hl_asymptotic(1.0, cfg) == doctest::Approx(k + 0.75).epsilon(1e-15));
    CHECK(hl_asymptotic(std::numbers::e, cfg) == doctest::Approx(std::numbers::e + k * std::numbers::e + 0.75).epsilon(1e-15));
    const double h = 1e-4;
    const double fd = (hl_asymptotic(100.0 + h, cfg) - hl_asymptotic(100.0 - h, cfg)) / (2 * h);
    CHECK(std::abs(fd - (std::log(100.0) + 1.0 + k)) <= 1e-6);
    CHECK(hl_asymptotic_slope(100.0, cfg) == doctest::Approx(std::log(100.0) + 1.0 + k).epsilon(1e-15));
}

TEST_CASE("phi1 solves the ladder equation") {
    zl_test::Gen gen(101);
    for (int i = 0; i < 25; ++i) {
        const double T = gen.log_uniform(100.0, 1.2e5);
        const auto p = ladder().phi1(T);
        CHECK(std::abs(p.residual) <= ladder().config().tol_root);
        CHECK(std::abs(hl_asymptotic(p.phi1, ladder().config()) - hl_integral(T, ladder().cache())) <=
              ladder().config().tol_root);
        CHECK(p.phi1 < T);
    }
}

TEST_CASE("complement T - phi1(T) tracks (1-c) T / ln T") {
    // oracle (smooth model): 1.0443, 1.0319, 1.0249; the realised ladder adds
    // the oscillating part of the Z^2 integral, largest relative at small T
    struct Row {
        double T, lo, hi;
    };
    for (const Row r : {Row{1e3, 0.85, 1.15}, Row{1e4, 0.85, 1.15}, Row{1e5, 0.85, 1.15}}) {
        const double ratio = (r.T - ladder().phi1(r.T).phi1) / complement(r.T);
        INFO("T = " << r.T << " ratio = " << ratio);
        CHECK(ratio >= r.lo);
        CHECK(ratio <= r.hi);
    }
    const double at_1e5 = (1e5 - ladder().phi1(1e5).phi1) / complement(1e5);
    CHECK(std::abs(at_1e5 - 1.0249) <= 0.01);
}

TEST_CASE("phi1 is nondecreasing") {
    zl_test::Gen gen(5);
    for (int i = 0; i < 30; ++i) {
        const double a = gen.uniform(200.0, 1e5);
        const double b = a + gen.log_uniform(1e-3, 50.0);
        CHECK(ladder().phi1(b).phi1 >= ladder().phi1(a).phi1);
    }
}

TEST_CASE("phi1_prime equals Z^2 / omega and matches finite differences") {
    zl_test::Gen gen(23);
    for (int i = 0; i < 20; ++i) {
        const double T = gen.uniform(500.0, 5e4);
        const auto s = ladder().sample(T);
        CHECK(s.z == hardy_z(T).z);
        CHECK(s.prime == doctest::Approx(s.z * s.z / s.omega).epsilon(1e-15));
        CHECK(rel_err(s.omega, std::log(s.point.phi1) + 1.0 + kC - std::log(2.0 * std::numbers::pi)) <= 1e-15);
        CHECK(ladder().phi1_prime(T) == s.prime);
        const double h = 1e-3;
        const double fd = (ladder().phi1(T + h).phi1 - ladder().phi1(T - h).phi1) / (2 * h);
        // second derivative of phi1 is O(|Z Z'| / omega); the residual floor is tol_root / h
        CHECK(std::abs(fd - s.prime) <= 1e-3 * std::max(1.0, s.prime) + 1e-4);
    }
}

TEST_CASE("omega grows like ln T") {
    const double r = ladder().omega(1e4) / std::log(1e4);
    CHECK(r >= 0.9);
    CHECK(r <= 1.2);
    CHECK(std::abs(r - 0.9664) <= 0.01);
}

TEST_CASE("phi1_inverse inverts phi1") {
    zl_test::Gen gen(77);
    for (int i = 0; i < 20; ++i) {
        const double U = gen.log_uniform(150.0, 1e5);
        const double x = ladder().phi1_inverse(U);
        CHECK(x > U);
        CHECK(std::abs(ladder().phi1(x).phi1 - U) <= ladder().config().tol_root);
    }
}

TEST_CASE("inversion round trips at fixed ordinates") {
    const double tol = ladder().config().tol_root;
    for (double U : {1e4, 5e4}) {
        CHECK(std::abs(ladder().phi1(ladder().phi1_inverse(U)).phi1 - U) <= 10.0 * tol);
        // away from zeros of Z the other composition is also tight
        const double back = ladder().phi1_inverse(ladder().phi1(U).phi1);
        const double prime = ladder().phi1_prime(U);
        if (prime > 1e-2) CHECK(std::abs(back - U) <= 10.0 * tol / prime);
    }
}

TEST_CASE("forward and reverse iteration are inverse to each other") {
    zl_test::Gen gen(3);
    for (int i = 0; i < 8; ++i) {
        const double T = gen.log_uniform(1e3, 5e4);
        const int k = gen.integer(1, 3);
        const auto seq = ladder().reverse_iterate(T, 1.0, k);
        REQUIRE(seq.lows.size() == static_cast<std::size_t>(k) + 1);
        CHECK(seq.lows[0] == T);
        CHECK(seq.highs[0] == T + 1.0);
        CHECK(std::abs(ladder().forward_iterate(seq.lows[k], k) - T) <= 1e-6);
        CHECK(std::abs(ladder().forward_iterate(seq.highs[k], k) - (T + 1.0)) <= 1e-6);
        for (double r : seq.low_residuals) CHECK(std::abs(r) <= ladder().config().tol_root);
        for (double r : seq.high_residuals) CHECK(std::abs(r) <= ladder().config().tol_root);
    }
}

TEST_CASE("orbit and forward_iterate") {
    CHECK(ladder().forward_iterate(5000.0, 0) == 5000.0);
    const auto o = ladder().orbit(5000.0, 3);
    REQUIRE(o.size() == 4);
    CHECK(o[0] == 5000.0);
    for (int r = 1; r <= 3; ++r) {
        CHECK(o[r] < o[r - 1]);
        CHECK(o[r] == ladder().forward_iterate(5000.0, r));
    }
}

TEST_CASE("reverse step ratio at T = 1e4") {
    const auto seq = ladder().reverse_iterate(1e4, 1.0, 1);
    const double ratio = (seq.lows[1] - 1e4) / complement(1e4);
    CHECK(ratio >= 0.85);
    CHECK(ratio <= 1.3);
    CHECK(std::abs(ratio - 1.0771) <= 0.02);
}

TEST_CASE("gap statistics at T = 1e5") {
    const auto seq = ladder().reverse_iterate(1e5, 1.0, 3);
    const auto g = gap_stats(seq, ladder().config());
    CHECK(g.ordered);
    CHECK(g.disjoint);
    CHECK(g.scale == doctest::Approx(complement(1e5)));
    REQUIRE(g.rows.size() == 4);
    CHECK_FALSE(g.rows[0].gap.has_value());
    const double oracle[] = {0.0, 1.0610, 1.0984, 1.1371};
    for (int r = 1; r <= 3; ++r) {
        REQUIRE(g.rows[r].gap_ratio.has_value());
        const double q = *g.rows[r].gap_ratio;
        INFO("r = " << r << " ratio = " << q);
        CHECK(q >= 0.85);
        CHECK(q <= 1.15);
        CHECK(std::abs(q - oracle[r]) <= 0.01);
        CHECK(g.rows[r].gap.value() > 0.0);
        CHECK(g.rows[r].length > 0.0);
    }
    // ratios drift up with r since each step starts from a larger ordinate
    CHECK(*g.rows[1].gap_ratio < *g.rows[2].gap_ratio);
    CHECK(*g.rows[2].gap_ratio < *g.rows[3].gap_ratio);
}

TEST_CASE("reverse segment length follows the inverse slope") {
    // length of [T^1, (T+H)^1] ~ integral of 1/phi1' ~ H * omega / Z^2 averaged, positive and finite
    const auto seq = ladder().reverse_iterate(2e4, 2.0, 2);
    for (int r = 0; r <= 2; ++r) CHECK(seq.highs[r] > seq.lows[r]);
    CHECK(seq.lows[1] > seq.highs[0]);
    CHECK(seq.lows[2] > seq.highs[1]);
}

TEST_CASE("k = 0 is the identity") {
    const auto seq = ladder().reverse_iterate(777.0, 3.0, 0);
    CHECK(seq.lows == std::vector<double>{777.0});
    CHECK(seq.highs == std::vector<double>{780.0});
    const auto g = gap_stats(seq, ladder().config());
    REQUIRE(g.rows.size() == 1);
    CHECK_FALSE(g.rows[0].gap.has_value());
    CHECK(g.ordered);
    CHECK(g.disjoint);
}

TEST_CASE("admissibility errors") {
    const auto& L = ladder();
    CHECK_THROWS_AS((void)L.phi1(50.0), Error);
    try {
        (void)L.phi1(2e5);
        FAIL("expected CacheExhaustedError");
    } catch (const CacheExhaustedError& e) {
        CHECK(e.required_t_max() >= 2e5);
    }
    CHECK_THROWS_AS((void)L.reverse_iterate(1e3, 0.0, 1), Error);
    CHECK_THROWS_AS((void)L.reverse_iterate(1e3, 1.0, -1), Error);
    CHECK_THROWS_AS((void)L.reverse_iterate(1e3, 1.0, 9), Error);
    CHECK_THROWS_AS((void)L.phi1_inverse(50.0), Error);
    CHECK_THROWS_AS((void)L.forward_iterate(101.0, 2), Error);  // phi1(101) < 100
}

TEST_CASE("reverse iteration past the cache names the required extent") {
    try {
        (void)ladder().reverse_iterate(1.1e5, 1.0, 5);
        FAIL("expected CacheExhaustedError");
    } catch (const CacheExhaustedError& e) {
        CHECK(e.required_t_max() > ladder().cache().t_max());
        CHECK(std::string(e.what()).rfind("reverse_iterate r=", 0) == 0);
    }
}

TEST_CASE("target below the ladder's reach") {
    LadderConfig cfg;
    cfg.c0 = 1e9;
    const Ladder L(zl_test::shared_cache(), cfg);
    try {
        (void)L.phi1(500.0);
        FAIL("expected below_threshold");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::below_threshold);
    }
}

TEST_CASE("iteration cap surfaces as a convergence error with a bracket") {
    LadderConfig cfg;
    cfg.max_iter = 1;
    const Ladder L(zl_test::shared_cache(), cfg);
    try {
        (void)L.phi1(5e4);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.kind() == ErrorKind::convergence);
        CHECK(e.bracket_lo() <= e.last_iterate());
        CHECK(e.last_iterate() <= e.bracket_hi());
    }
}

TEST_CASE("c0 shifts phi1 by about -c0 / omega") {
    LadderConfig cfg;
    cfg.c0 = 50.0;
    const Ladder L(zl_test::shared_cache(), cfg);
    const double T = 3e4;
    const double shift = L.phi1(T).phi1 - ladder().phi1(T).phi1;
    CHECK(shift == doctest::Approx(-50.0 / ladder().omega(T)).epsilon(1e-3));
}

TEST_CASE("copies share the cache") {
    const Ladder copy = ladder();
    CHECK(copy.cache_ptr() == ladder().cache_ptr());
    CHECK(copy.phi1(1234.5).phi1 == ladder().phi1(1234.5).phi1);
}
