#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "zeta_ladder/error.hpp"
#include "zeta_ladder/ortho.hpp"
#include "zeta_ladder/special.hpp"
#include "zeta_ladder/zeta.hpp"

using namespace zeta_ladder;
using zl_test::rel_err;

namespace {

const Ladder& ladder() {
    static const Ladder l(zl_test::shared_cache());
    return l;
}

}  // namespace

TEST_CASE("fourier members and norms") {
    const auto b = BaseSystem::fourier(0.5);
    CHECK(b.kind() == SystemKind::fourier);
    CHECK(b.length() == 1.0);
    CHECK(b.first_index() == 0);
    CHECK(b.eval(0, 0.3) == 1.0);
    CHECK(b.eval(1, 0.3) == doctest::Approx(std::cos(2.0 * std::numbers::pi * 0.3)));
    CHECK(b.eval(2, 0.3) == doctest::Approx(std::sin(2.0 * std::numbers::pi * 0.3)));
    CHECK(b.eval(5, 0.1) == doctest::Approx(std::cos(6.0 * std::numbers::pi * 0.1)));
    CHECK(b.norm(0) == 1.0);
    CHECK(b.norm(3) == 0.5);
    const auto nt = b.norms(4);
    CHECK(nt.first_index == 0);
    CHECK(nt.A == std::vector<double>{1.0, 0.5, 0.5, 0.5});
    CHECK(std::string(to_string(b.kind())) == "fourier");
}

TEST_CASE("jacobi members on [0, 2]") {
    const auto b = BaseSystem::jacobi(0.5, 1.5);
    CHECK(b.l() == 1.0);
    const double t = 0.7;
    const double u = t - 1.0;
    const double want = std::sqrt(std::pow(1 - u, 0.5) * std::pow(1 + u, 1.5)) * special::jacobi_p(3, 0.5, 1.5, u);
    CHECK(b.eval(3, t) == doctest::Approx(want).epsilon(1e-14));
    CHECK(b.norm(2) == special::jacobi_norm(2, 0.5, 1.5));
    CHECK_FALSE(b.singular_endpoints());
    CHECK(BaseSystem::jacobi(-0.5, 0.0).singular_endpoints());
}

TEST_CASE("jacobi singular endpoints") {
    const auto b = BaseSystem::jacobi(-0.5, -0.25);
    for (double t : {0.0, 2.0}) {
        try {
            (void)b.eval(1, t);
            FAIL("expected singular_point");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::singular_point);
        }
    }
    CHECK(std::isfinite(b.eval(1, 1e-9)));
    CHECK_THROWS_AS((void)BaseSystem::jacobi(-1.0, 0.0), Error);
}

TEST_CASE("bessel members and norms") {
    const auto b = BaseSystem::bessel(0, 0.5);
    CHECK(b.first_index() == 1);
    CHECK(b.last_index() == special::kBesselMaxZeroIndex);
    CHECK(b.bessel_root(1) == doctest::Approx(2.4048255576957727686).epsilon(1e-12));
    // vanishes at both ends
    CHECK(b.eval(1, 0.0) == 0.0);
    CHECK(std::abs(b.eval(1, 1.0)) <= 1e-12);
    // oracle: tests/oracles/special_oracle.py, l = 1/2
    CHECK(rel_err(b.norm(1), 0.13475706197095846307) <= 1e-12);
    CHECK(rel_err(b.norm(2), 0.057890069291101847904) <= 1e-12);
    CHECK(rel_err(b.norm(3), 0.03684317556820410757) <= 1e-12);
    CHECK_THROWS_AS((void)b.eval(0, 0.5), Error);
    CHECK_THROWS_AS((void)b.eval(21, 0.5), Error);
}

TEST_CASE("closed-form norms at named cases") {
    CHECK(BaseSystem::jacobi(0.0, 0.0).norm(0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(BaseSystem::fourier(std::numbers::pi).norm(0) == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-15));
    CHECK(BaseSystem::fourier(std::numbers::pi).norm(4) == doctest::Approx(std::numbers::pi).epsilon(1e-15));
    const auto b = BaseSystem::bessel(0, 0.5);
    const double jp = -special::bessel_j(1, b.bessel_root(1));
    CHECK(rel_err(b.norm(1), 2.0 * 0.25 * jp * jp) <= 1e-13);
}

TEST_CASE("base systems are orthogonal on [0, 2l]") {
    // six members each, off-diagonals well under 1e-8 sqrt(A_m A_n)
    CHECK(base_orthogonality_defect(BaseSystem::fourier(std::numbers::pi), 6, 1e-12) <= 1e-8);
    CHECK(base_orthogonality_defect(BaseSystem::jacobi(-0.5, 0.5), 6, 1e-12) <= 1e-8);
    CHECK(base_orthogonality_defect(BaseSystem::bessel(0, 0.5), 6, 1e-12) <= 1e-8);
    CHECK(base_orthogonality_defect(BaseSystem::fourier(0.75), 9, 1e-12) <= 1e-10);
    CHECK(base_orthogonality_defect(BaseSystem::jacobi(0.0, 0.0), 8, 1e-12) <= 1e-10);
    CHECK(base_orthogonality_defect(BaseSystem::jacobi(1.5, 0.5), 6, 1e-12) <= 1e-10);
    CHECK(base_orthogonality_defect(BaseSystem::bessel(1, 0.5), 6, 1e-12) <= 1e-9);
    CHECK(base_orthogonality_defect(BaseSystem::bessel(2, 2.0), 5, 1e-12) <= 1e-9);
}

TEST_CASE("eval rejects points outside [0, 2l]") {
    const auto b = BaseSystem::fourier(1.0);
    CHECK_THROWS_AS((void)b.eval(0, -0.1), Error);
    CHECK_THROWS_AS((void)b.eval(0, 2.1), Error);
    CHECK_THROWS_AS((void)b.eval(-1, 1.0), Error);
    CHECK_THROWS_AS((void)BaseSystem::fourier(0.0), Error);
}

TEST_CASE("custom systems are vetted when lifted") {
    const auto shifted_legendre = [](int n, double t) { return special::jacobi_p(n, 0.0, 0.0, t - 1.0); };
    std::vector<double> norms;
    for (int n = 0; n < 5; ++n) norms.push_back(2.0 / (2.0 * n + 1.0));
    const auto good = BaseSystem::custom(1.0, shifted_legendre, norms);
    CHECK(good.kind() == SystemKind::custom);
    CHECK(good.last_index() == 4);
    CHECK_NOTHROW(LiftedSystem(good, 2000.0, 1, ladder()));

    auto wrong = norms;
    wrong[2] *= 1.5;
    const auto bad = BaseSystem::custom(1.0, shifted_legendre, wrong);
    CHECK_THROWS_AS(LiftedSystem(bad, 2000.0, 1, ladder()), Error);

    const auto monomials = BaseSystem::custom(1.0, [](int n, double t) { return std::pow(t, n); }, {2.0, 2.0, 8.0 / 3.0});
    CHECK_THROWS_AS(LiftedSystem(monomials, 2000.0, 1, ladder()), Error);
    CHECK_THROWS_AS((void)BaseSystem::custom(1.0, shifted_legendre, {}), Error);
}

TEST_CASE("lifted members equal base members times prod |Z~|") {
    const auto base = BaseSystem::fourier(0.5);
    const LiftedSystem ls(base, 1e4, 2, ladder());
    CHECK(ls.k() == 2);
    CHECK(ls.lo() < ls.hi());
    CHECK(ls.lo() > 1e4 + 1.0);
    zl_test::Gen gen(12);
    for (int i = 0; i < 10; ++i) {
        const double t = gen.uniform(ls.lo(), ls.hi());
        const auto o = ls.orbit(t);
        REQUIRE(o.points.size() == 3);
        CHECK(o.points[0] == t);
        double w = 1.0;
        double zf = 1.0;
        for (int r = 0; r < 2; ++r) {
            const double z = hardy_z(o.points[r]).z;
            CHECK(o.z[r] == z);
            w *= z * z / ladder().omega(o.points[r]);
            zf *= std::abs(z) / std::sqrt(ladder().omega(o.points[r]));
        }
        CHECK(o.weight_sq == doctest::Approx(w).epsilon(1e-13));
        CHECK(o.argument >= 0.0);
        CHECK(o.argument <= 1.0);
        // the argument also drops the ulp-level residual of phi1^k at the segment ends
        CHECK(std::abs(o.argument - (o.points[2] - 1e4)) <= 1e-10);
        for (int n = 0; n < 5; ++n) {
            const double want = base.eval(n, o.argument) * zf;
            CHECK(ls.eval(n, t) == doctest::Approx(want).epsilon(1e-12).scale(1e-14));
            CHECK(ls.eval_zeta_form(n, t) == doctest::Approx(ls.eval(n, t)).epsilon(1e-12).scale(1e-14));
        }
    }
}

TEST_CASE("lifted endpoints map to the base endpoints") {
    const LiftedSystem ls(BaseSystem::bessel(0, 0.5), 5e4, 1, ladder());
    CHECK(ls.orbit(ls.lo()).argument == doctest::Approx(0.0).scale(1e-6));
    CHECK(ls.orbit(ls.hi()).argument == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS((void)ls.orbit(ls.lo() - 1.0), Error);
    CHECK_THROWS_AS((void)ls.orbit(ls.hi() + 1.0), Error);
}

TEST_CASE("lifted jacobi uses the pullback argument by default") {
    const auto base = BaseSystem::jacobi(0.5, 0.5);
    const LiftedSystem pull(base, 3e3, 1, ladder());
    const LiftedSystem literal(base, 3e3, 1, ladder(), JacobiArgument::literal);
    CHECK(pull.jacobi_argument() == JacobiArgument::pullback);
    CHECK(literal.jacobi_argument() == JacobiArgument::literal);
    const double t = 0.5 * (pull.lo() + pull.hi());
    // the literal argument t - T - 1 lies far outside [-1, 1] on the reverse segment
    CHECK(pull.eval(2, t) != doctest::Approx(literal.eval(2, t)));
}

TEST_CASE("lifting validation") {
    CHECK_THROWS_AS(LiftedSystem(BaseSystem::fourier(0.5), 1e4, 0, ladder()), Error);
    CHECK_THROWS_AS(LiftedSystem(BaseSystem::fourier(0.5), 50.0, 1, ladder()), Error);
    CHECK_THROWS_AS(LiftedSystem(BaseSystem::fourier(0.5), 1.2e5, 3, ladder()), CacheExhaustedError);
}

TEST_CASE("forward_orbit leaves the argument for settle") {
    const auto o = forward_orbit(ladder(), 2e4, 2);
    CHECK(o.points.size() == 3);
    CHECK(o.prime.size() == 2);
    CHECK(o.prime[0] == doctest::Approx(ladder().phi1_prime(2e4)).epsilon(1e-15));
}
