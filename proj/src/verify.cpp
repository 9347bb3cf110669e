#include "zeta_ladder/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "zeta_ladder/cache.hpp"
#include "zeta_ladder/error.hpp"
#include "zeta_ladder/parallel.hpp"
#include "zeta_ladder/zeta.hpp"

namespace zeta_ladder {

namespace {

std::string num(double x) {
    std::ostringstream s;
    s.precision(17);
    s << x;
    return s.str();
}

double pick_tol(const VerifyOptions& options, int k) {
    return options.tol > 0.0 ? options.tol : default_lifted_tol(k);
}

QuadOptions quad_options(const VerifyOptions& options, double tol) {
    QuadOptions q;
    q.tol = tol;
    q.max_panels = options.max_panels;
    q.throw_on_budget = false;
    q.progress = options.progress;
    return q;
}

void fill_gram(GramReport& rep, const VectorQuadResult& r) {
    const auto n = static_cast<std::size_t>(rep.N);
    rep.matrix.assign(n, std::vector<double>(n, 0.0));
    rep.errors.assign(n, std::vector<double>(n, 0.0));
    std::size_t c = 0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b, ++c) {
            rep.matrix[a][b] = rep.matrix[b][a] = r.values[c];
            rep.errors[a][b] = rep.errors[b][a] = r.error_estimates[c];
        }
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const double scale = std::sqrt(rep.norms_expected.A[a] * rep.norms_expected.A[b]);
            if (a == b) {
                rep.max_diag_rel_err = std::max(rep.max_diag_rel_err, std::abs(rep.matrix[a][a] / scale - 1.0));
            } else {
                rep.max_offdiag_rel = std::max(rep.max_offdiag_rel, std::abs(rep.matrix[a][b]) / scale);
            }
        }
    }
    rep.evaluations = r.evaluations;
    rep.panels = r.panels;
    rep.converged = r.converged;
}

void check_gram_size(int N, int first, int last, int n_max) {
    if (N < 1 || N > n_max) {
        throw Error(ErrorKind::domain, "gram: N must be in [1, " + std::to_string(n_max) + "]");
    }
    if (first + N - 1 > last) {
        throw Error(ErrorKind::domain, "gram: system has only " + std::to_string(last - first + 1) + " members");
    }
}

// Upper-triangle products of the member values.
void triangle(const std::vector<double>& f, double* out) {
    std::size_t c = 0;
    for (std::size_t a = 0; a < f.size(); ++a) {
        for (std::size_t b = a; b < f.size(); ++b) out[c++] = f[a] * f[b];
    }
}

MomentReport zeta_moment(double T, int k, double l, const Ladder& ladder, const VerifyOptions& options,
                         double reference) {
    MomentReport rep;
    rep.T = T;
    rep.k = k;
    rep.l = l;
    rep.tol = pick_tol(options, k);
    rep.reference = reference;
    const IterSeq seq = ladder.reverse_iterate(T, 2.0 * l, k);
    rep.segment_lo = seq.lows.back();
    rep.segment_hi = seq.highs.back();
    const auto r = integrate_orbit(
        ladder, seq, 1,
        [](Orbit& o, double* out) {
            double p = 1.0;
            for (double z : o.z) p *= z * z;
            out[0] = p;
        },
        options);
    rep.quad = QuadResult{r.values[0], r.error_estimates[0], r.evaluations, r.panels};
    rep.converged = r.converged;
    rep.ratio = rep.quad.value / reference;
    return rep;
}

}  // namespace

double default_lifted_tol(int k) noexcept { return k >= 2 ? 1e-6 : 1e-8; }

std::vector<double> orbit_sign_changes(const Ladder& ladder, double a, double b, int k, unsigned threads) {
    if (!(b > a) || k < 1) return {};
    const auto m = static_cast<std::size_t>(std::max(16.0, std::ceil(8.0 * (b - a))));
    std::vector<double> t(m + 1);
    std::vector<std::vector<double>> z(m + 1);
    for (std::size_t j = 0; j <= m; ++j) t[j] = j == m ? b : a + (b - a) * static_cast<double>(j) / m;
    parallel_for(m + 1, threads, [&](std::size_t j) { z[j] = forward_orbit(ladder, t[j], k).z; });

    std::vector<double> cuts;
    for (std::size_t j = 0; j < m; ++j) {
        for (int r = 0; r < k; ++r) {
            const double za = z[j][static_cast<std::size_t>(r)];
            const double zb = z[j + 1][static_cast<std::size_t>(r)];
            if (za == 0.0 || zb == 0.0 || (za < 0.0) == (zb < 0.0)) continue;
            double lo = t[j];
            double hi = t[j + 1];
            for (int it = 0; it < 60 && hi - lo > 1e-9 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double zm = forward_orbit(ladder, mid, r + 1).z.back();
                if (zm == 0.0) {
                    lo = hi = mid;
                } else if ((zm < 0.0) == (za < 0.0)) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            cuts.push_back(0.5 * (lo + hi));
        }
    }
    std::sort(cuts.begin(), cuts.end());
    return cuts;
}

VectorQuadResult integrate_orbit(const Ladder& ladder, const IterSeq& seq, std::size_t dim,
                                 const OrbitIntegrand& component, const VerifyOptions& options) {
    const int k = seq.k;
    const double a = seq.lows.back();
    const double b = seq.highs.back();
    QuadOptions q = quad_options(options, pick_tol(options, k));
    if (options.seed_breakpoints) {
        for (double c : orbit_sign_changes(ladder, a, b, k, options.threads)) q.breakpoints.push_back(c - a);
    }
    // Integrate in s = t - a: panels next to a can then shrink below ulp(a),
    // which endpoint singularities of the lifted systems need.
    const BatchIntegrand f = [&](std::span<const double> s, std::span<double> out) {
        parallel_for(s.size(), options.threads, [&](std::size_t i) {
            Orbit o = forward_orbit(ladder, a + s[i], k);
            o.offset = s[i];
            component(o, out.data() + i * dim);
        });
    };
    return integrate_batch(f, dim, 0.0, b - a, q);
}

SubstitutionReport verify_substitution(const std::function<double(double)>& f, double T, double H, int k,
                                       const Ladder& ladder, const VerifyOptions& options) {
    if (!f) throw Error(ErrorKind::domain, "verify_substitution: empty integrand");
    SubstitutionReport rep;
    rep.T = T;
    rep.H = H;
    rep.k = k;
    rep.tol = pick_tol(options, k);
    const IterSeq seq = ladder.reverse_iterate(T, H, k);
    rep.segment_lo = seq.lows.back();
    rep.segment_hi = seq.highs.back();

    QuadOptions q = quad_options(options, rep.tol);
    q.throw_on_budget = true;
    const QuadResult lhs = integrate(f, T, T + H, q);
    rep.lhs = lhs.value;
    rep.lhs_error = lhs.error_estimate;

    const auto rhs = integrate_orbit(
        ladder, seq, 1, [&f](Orbit& o, double* out) { out[0] = f(o.points.back()) * o.weight_sq; }, options);
    rep.rhs = rhs.values[0];
    rep.rhs_error = rhs.error_estimates[0];
    rep.evaluations = lhs.evaluations + rhs.evaluations;

    rep.abs_diff = std::abs(rep.lhs - rep.rhs);
    rep.rel_diff = rep.lhs != 0.0 ? rep.abs_diff / std::abs(rep.lhs) : std::numeric_limits<double>::infinity();
    if (rep.abs_diff == 0.0) rep.rel_diff = 0.0;
    rep.limit = std::max(options.check_rel * std::abs(rep.lhs), options.check_abs_per_length * H);
    rep.converged = rhs.converged;
    rep.passed = rep.converged && rep.abs_diff <= rep.limit;
    return rep;
}

GramReport gram_matrix(const LiftedSystem& ls, int N, const VerifyOptions& options) {
    const BaseSystem& base = ls.base();
    check_gram_size(N, base.first_index(), base.last_index(), options.n_max);
    GramReport rep;
    rep.N = N;
    rep.k = ls.k();
    rep.T = ls.T();
    rep.l = base.l();
    rep.segment_lo = ls.lo();
    rep.segment_hi = ls.hi();
    rep.tol = pick_tol(options, rep.k);
    rep.norms_expected = base.norms(N);
    for (int i = 0; i < N; ++i) rep.indices.push_back(base.first_index() + i);

    const auto n = static_cast<std::size_t>(N);
    const auto r = integrate_orbit(
        ls.ladder(), ls.seq(), n * (n + 1) / 2,
        [&](Orbit& o, double* out) {
            ls.settle(o);
            std::vector<double> f(n);
            for (std::size_t m = 0; m < n; ++m) f[m] = ls.member(rep.indices[m], o);
            triangle(f, out);
        },
        options);
    fill_gram(rep, r);
    return rep;
}

GramReport base_gram_matrix(const BaseSystem& base, int N, const VerifyOptions& options) {
    check_gram_size(N, base.first_index(), base.last_index(), options.n_max);
    GramReport rep;
    rep.N = N;
    rep.l = base.l();
    rep.tol = pick_tol(options, 0);
    rep.norms_expected = base.norms(N);
    for (int i = 0; i < N; ++i) rep.indices.push_back(base.first_index() + i);
    rep.segment_lo = 0.0;
    rep.segment_hi = base.length();

    const auto n = static_cast<std::size_t>(N);
    const std::size_t dim = n * (n + 1) / 2;
    const BatchIntegrand f = [&](std::span<const double> x, std::span<double> out) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < x.size(); ++i) {
            for (std::size_t m = 0; m < n; ++m) v[m] = base.eval(rep.indices[m], x[i]);
            triangle(v, out.data() + i * dim);
        }
    };
    QuadOptions q = quad_options(options, rep.tol);
    q.initial_panels = 4 * N;
    fill_gram(rep, integrate_batch(f, dim, rep.segment_lo, rep.segment_hi, q));
    return rep;
}

MomentReport moment_exact(double T, int k, double l, const Ladder& ladder, const VerifyOptions& options) {
    if (!(l > 0.0) || !std::isfinite(l)) throw Error(ErrorKind::domain, "moment_exact: l must be > 0");
    MomentReport rep;
    rep.T = T;
    rep.k = k;
    rep.l = l;
    rep.tol = pick_tol(options, k);
    rep.reference = 2.0 * l;
    const IterSeq seq = ladder.reverse_iterate(T, 2.0 * l, k);
    rep.segment_lo = seq.lows.back();
    rep.segment_hi = seq.highs.back();
    const auto r = integrate_orbit(ladder, seq, 1, [](Orbit& o, double* out) { out[0] = o.weight_sq; }, options);
    rep.quad = QuadResult{r.values[0], r.error_estimates[0], r.evaluations, r.panels};
    rep.converged = r.converged;
    rep.ratio = rep.quad.value / rep.reference;
    return rep;
}

MomentReport moment_zeta(double T, int k, double l, const Ladder& ladder, const VerifyOptions& options) {
    if (!(l > 0.0) || !std::isfinite(l)) throw Error(ErrorKind::domain, "moment_zeta: l must be > 0");
    if (k < 0) throw Error(ErrorKind::domain, "moment_zeta: k must be >= 0");
    if (k > 0) return zeta_moment(T, k, l, ladder, options, 2.0 * l * std::pow(std::log(T), k));

    MomentReport rep;
    rep.T = T;
    rep.l = l;
    rep.tol = pick_tol(options, 0);
    rep.reference = 2.0 * l;
    rep.segment_lo = T;
    rep.segment_hi = T + 2.0 * l;
    (void)ladder.phi1(T);  // admissibility of T
    QuadOptions q = quad_options(options, rep.tol);
    q.throw_on_budget = true;
    rep.quad = integrate([](double t) { return hardy_z(t).abs_zeta_sq; }, T, T + 2.0 * l, q);
    rep.cross_check = hl_integral(T + 2.0 * l, ladder.cache()) - hl_integral(T, ladder.cache());
    rep.ratio = rep.quad.value / rep.reference;
    return rep;
}

MomentReport corollary_46(double T, int k, double omega, const Ladder& ladder, const VerifyOptions& options) {
    if (k < 1) throw Error(ErrorKind::domain, "corollary_46: k must be >= 1");
    if (!(T > 1.0) || !std::isfinite(T)) throw Error(ErrorKind::domain, "corollary_46: T must exceed 1");
    const double log_t = std::log(T);
    const double bound = 0.01 * T * std::pow(log_t, k - 1);
    if (!(omega > 0.0) || !(omega <= bound)) {
        throw Error(ErrorKind::domain, "corollary_46: Omega = " + num(omega) + " must be in (0, " + num(bound) + "]");
    }
    const double l = 0.5 * omega / std::pow(log_t, k);
    return zeta_moment(T, k, l, ladder, options, omega);
}

}  // namespace zeta_ladder
