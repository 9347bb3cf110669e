#include "zeta_ladder/ortho.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "zeta_ladder/error.hpp"
#include "zeta_ladder/quadrature.hpp"
#include "zeta_ladder/special.hpp"

namespace zeta_ladder {

namespace {

constexpr double kPi = std::numbers::pi;

// Custom systems must be orthogonal to this relative accuracy before lifting.
constexpr double kCustomOrthTol = 1e-6;

// Smallest argument fed to a base with endpoint singularities.
constexpr double kEndpointMargin = 1e-150;
// Distance from a singular endpoint inside which the argument is linearised.
constexpr double kEndpointWindow = 1e-6;

std::string num(double x) {
    std::ostringstream s;
    s.precision(17);
    s << x;
    return s.str();
}

}  // namespace

const char* to_string(SystemKind kind) noexcept {
    switch (kind) {
        case SystemKind::fourier: return "fourier";
        case SystemKind::jacobi: return "jacobi";
        case SystemKind::bessel: return "bessel";
        case SystemKind::custom: return "custom";
    }
    return "unknown";
}

BaseSystem BaseSystem::fourier(double l) {
    if (!(l > 0.0) || !std::isfinite(l)) throw Error(ErrorKind::domain, "fourier: l must be > 0");
    BaseSystem s;
    s.kind_ = SystemKind::fourier;
    s.l_ = l;
    s.first_ = 0;
    s.last_ = 1 << 20;
    return s;
}

BaseSystem BaseSystem::jacobi(double alpha, double beta) {
    if (!(alpha > -1.0) || !(beta > -1.0)) {
        throw Error(ErrorKind::domain, "jacobi: requires alpha > -1 and beta > -1");
    }
    BaseSystem s;
    s.kind_ = SystemKind::jacobi;
    s.l_ = 1.0;
    s.alpha_ = alpha;
    s.beta_ = beta;
    s.first_ = 0;
    s.last_ = 1 << 20;
    return s;
}

BaseSystem BaseSystem::bessel(int order, double l) {
    if (order < 0 || order > 100) throw Error(ErrorKind::domain, "bessel: order must be in [0, 100]");
    if (!(l > 0.0) || !std::isfinite(l)) throw Error(ErrorKind::domain, "bessel: l must be > 0");
    BaseSystem s;
    s.kind_ = SystemKind::bessel;
    s.l_ = l;
    s.order_ = order;
    s.first_ = 1;
    s.last_ = special::kBesselMaxZeroIndex;
    for (int m = 1; m <= special::kBesselMaxZeroIndex; ++m) s.roots_.push_back(special::bessel_zero(order, m));
    return s;
}

BaseSystem BaseSystem::custom(double l, Family family, std::vector<double> norms, int first_index) {
    if (!(l > 0.0) || !std::isfinite(l)) throw Error(ErrorKind::domain, "custom: l must be > 0");
    if (!family) throw Error(ErrorKind::domain, "custom: family is empty");
    if (norms.empty()) throw Error(ErrorKind::domain, "custom: norm table is empty");
    for (double a : norms) {
        if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorKind::domain, "custom: norms must be finite and > 0");
    }
    BaseSystem s;
    s.kind_ = SystemKind::custom;
    s.l_ = l;
    s.first_ = first_index;
    s.last_ = first_index + static_cast<int>(norms.size()) - 1;
    s.family_ = std::make_shared<const Family>(std::move(family));
    s.custom_norms_ = std::move(norms);
    return s;
}

std::string BaseSystem::describe() const {
    std::ostringstream s;
    s << to_string(kind_);
    switch (kind_) {
        case SystemKind::jacobi: s << "(alpha=" << alpha_ << ", beta=" << beta_ << ")"; break;
        case SystemKind::bessel: s << "(order=" << order_ << ", l=" << l_ << ")"; break;
        default: s << "(l=" << l_ << ")"; break;
    }
    return s.str();
}

bool BaseSystem::singular_endpoints() const noexcept {
    return kind_ == SystemKind::jacobi && (alpha_ < 0.0 || beta_ < 0.0);
}

void BaseSystem::check_index(int n) const {
    if (n < first_ || n > last_) {
        throw Error(ErrorKind::domain, std::string(to_string(kind_)) + ": index " + std::to_string(n) +
                                           " outside [" + std::to_string(first_) + ", " + std::to_string(last_) +
                                           "]");
    }
}

double BaseSystem::bessel_root(int m) const {
    if (kind_ != SystemKind::bessel) throw Error(ErrorKind::domain, "bessel_root: not a bessel system");
    check_index(m);
    return roots_[static_cast<std::size_t>(m - 1)];
}

double BaseSystem::eval(int n, double t) const {
    check_index(n);
    if (!(t >= 0.0 && t <= 2.0 * l_)) {
        throw Error(ErrorKind::domain, describe() + ": t = " + num(t) + " outside [0, " + num(2.0 * l_) + "]");
    }
    switch (kind_) {
        case SystemKind::fourier: {
            if (n == 0) return 1.0;
            const int j = (n + 1) / 2;
            const double x = j * kPi * t / l_;
            return n % 2 == 1 ? std::cos(x) : std::sin(x);
        }
        case SystemKind::jacobi: {
            const double u = t - 1.0;
            if ((t == 2.0 && alpha_ < 0.0) || (t == 0.0 && beta_ < 0.0)) {
                throw Error(ErrorKind::singular_point, describe() + ": integrable singularity at t = " + num(t));
            }
            // 1 - u and 1 + u taken from t directly, exact near the endpoints
            const double w = std::pow(2.0 - t, alpha_) * std::pow(t, beta_);
            return std::sqrt(w) * special::jacobi_p(n, alpha_, beta_, u);
        }
        case SystemKind::bessel: {
            const double mu = roots_[static_cast<std::size_t>(n - 1)];
            return std::sqrt(t) * special::bessel_j(order_, mu * t / (2.0 * l_));
        }
        case SystemKind::custom: return (*family_)(n, t);
    }
    return 0.0;
}

double BaseSystem::norm(int n) const {
    check_index(n);
    switch (kind_) {
        case SystemKind::fourier: return n == 0 ? 2.0 * l_ : l_;
        case SystemKind::jacobi: return special::jacobi_norm(n, alpha_, beta_);
        case SystemKind::bessel: {
            const double d = special::bessel_j_prime(order_, roots_[static_cast<std::size_t>(n - 1)]);
            return 2.0 * l_ * l_ * d * d;
        }
        case SystemKind::custom: return custom_norms_[static_cast<std::size_t>(n - first_)];
    }
    return 0.0;
}

NormTable BaseSystem::norms(int count) const {
    if (count < 1) throw Error(ErrorKind::domain, "norms: count must be >= 1");
    NormTable table;
    table.first_index = first_;
    for (int i = 0; i < count; ++i) table.A.push_back(norm(first_ + i));
    return table;
}

double base_orthogonality_defect(const BaseSystem& base, int count, double tol) {
    if (count < 1) throw Error(ErrorKind::domain, "base_orthogonality_defect: count must be >= 1");
    const auto n = static_cast<std::size_t>(count);
    const std::size_t dim = n * (n + 1) / 2;
    std::vector<double> f(n);
    const double len = base.length();
    const bool singular = base.singular_endpoints();
    const BatchIntegrand integrand = [&](std::span<const double> x, std::span<double> out) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            // singular ends: t = (len/2)(1 - cos u) so dt = (len/2) sin u du absorbs the weight
            double t = x[i];
            double jac = 1.0;
            if (singular) {
                t = 0.5 * len * (1.0 - std::cos(x[i]));
                jac = 0.5 * len * std::sin(x[i]);
            }
            t = std::clamp(t, kEndpointMargin * len, std::nextafter(len, 0.0));
            for (std::size_t m = 0; m < n; ++m) f[m] = base.eval(base.first_index() + static_cast<int>(m), t);
            std::size_t c = 0;
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = a; b < n; ++b) out[i * dim + c++] = f[a] * f[b] * jac;
            }
        }
    };
    QuadOptions options;
    options.tol = tol;
    options.initial_panels = 4 * count;
    options.max_panels = 40000;
    const auto r = integrate_batch(integrand, dim, 0.0, singular ? std::numbers::pi : len, options);

    const NormTable norms = base.norms(count);
    double defect = 0.0;
    std::size_t c = 0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b, ++c) {
            if (a == b) {
                defect = std::max(defect, std::abs(r.values[c] / norms.A[a] - 1.0));
            } else {
                defect = std::max(defect, std::abs(r.values[c]) / std::sqrt(norms.A[a] * norms.A[b]));
            }
        }
    }
    return defect;
}

LiftedSystem::LiftedSystem(BaseSystem base, double T, int k, Ladder ladder, JacobiArgument argument)
    : base_(std::move(base)), ladder_(std::move(ladder)), argument_(argument) {
    if (k < 1) throw Error(ErrorKind::domain, "LiftedSystem: k must be >= 1");
    if (base_.kind() == SystemKind::custom) {
        const int count = base_.last_index() - base_.first_index() + 1;
        const double defect = base_orthogonality_defect(base_, count, 1e-10);
        if (defect > kCustomOrthTol) {
            throw Error(ErrorKind::domain,
                        "LiftedSystem: custom base is not orthogonal against its norm table (defect " + num(defect) + ")");
        }
    }
    seq_ = ladder_.reverse_iterate(T, base_.length(), k);
    end_error_lo_ = ladder_.forward_iterate(lo(), k) - T;
    end_error_hi_ = ladder_.forward_iterate(hi(), k) - (T + base_.length());
}

Orbit forward_orbit(const Ladder& ladder, double t, int k) {
    Orbit o;
    o.points.reserve(static_cast<std::size_t>(k) + 1);
    o.points.push_back(t);
    for (int r = 0; r < k; ++r) {
        const LadderSample s = ladder.sample(o.points.back());
        o.z.push_back(s.z);
        o.omega.push_back(s.omega);
        o.prime.push_back(s.prime);
        o.weight_sq *= s.prime;
        o.points.push_back(s.point.phi1);
    }
    return o;
}

Orbit LiftedSystem::orbit(double t) const {
    if (!(t >= lo() && t <= hi())) {
        throw Error(ErrorKind::domain, "lifted: t = " + num(t) + " outside [" + num(lo()) + ", " + num(hi()) + "]");
    }
    Orbit o = forward_orbit(ladder_, t, seq_.k);
    settle(o);
    return o;
}

void LiftedSystem::settle(Orbit& o) const {
    const double len = base_.length();
    const double arg = o.points.back() - seq_.T;
    if (arg < -kDriftTolerance || arg > len + kDriftTolerance) {
        throw Error(ErrorKind::consistency, "lifted: orbit of t = " + num(o.points.front()) + " lands at " + num(arg) +
                                                ", outside [0, " + num(len) + "] beyond drift tolerance");
    }
    const bool exact = std::isfinite(o.offset);
    const double span = hi() - lo();
    const double from_lo = exact ? o.offset : o.points.front() - lo();
    const double frac = span > 0.0 ? from_lo / span : 0.0;
    o.argument = std::clamp(arg - end_error_lo_ - (end_error_hi_ - end_error_lo_) * frac, 0.0, len);
    if (base_.singular_endpoints()) {
        // T^k carries the root-solve error, so phi1^k(t) - T is noise right at
        // the ends. Linearising about the segment end maps it onto 0 (or 2l)
        // exactly, which keeps the t^{-1/2}-type mass next to it.
        const double window = kEndpointWindow * len;
        const double to_hi = exact ? span - o.offset : hi() - o.points.front();
        const double near_lo = o.weight_sq * from_lo;
        const double near_hi = len - o.weight_sq * to_hi;
        // select by the argument itself: w * distance is also small wherever Z vanishes
        if (o.argument < window) o.argument = std::clamp(near_lo, 0.0, len);
        else if (len - o.argument < window) o.argument = std::clamp(near_hi, 0.0, len);
    }
}

double LiftedSystem::member(int n, const Orbit& o) const {
    double x = o.argument;
    if (argument_ == JacobiArgument::literal && base_.kind() == SystemKind::jacobi) {
        // Literal form: P_n(t - T - 1) at the unmapped abscissa. The weight uses
        // |1 -+ u| so it stays real off [-1, 1].
        const double u = o.points.front() - seq_.T - 1.0;
        const double w = std::pow(std::abs(1.0 - u), base_.alpha()) * std::pow(std::abs(1.0 + u), base_.beta());
        return std::sqrt(w) * special::jacobi_p(n, base_.alpha(), base_.beta(), u) * std::sqrt(o.weight_sq);
    }
    if (base_.singular_endpoints()) {
        // only a clamped argument lands exactly on an end; any finite value will do there
        const double len = base_.length();
        x = std::clamp(x, kEndpointMargin * len, std::nextafter(len, 0.0));
    }
    return base_.eval(n, x) * std::sqrt(o.weight_sq);
}

double LiftedSystem::eval(int n, double t) const { return member(n, orbit(t)); }

double LiftedSystem::eval_zeta_form(int n, double t) const {
    const Orbit o = orbit(t);
    double product = 1.0;
    for (std::size_t r = 0; r < o.z.size(); ++r) product *= std::abs(o.z[r]) / std::sqrt(o.omega[r]);
    Orbit bare = o;
    bare.weight_sq = 1.0;
    return member(n, bare) * product;
}

}  // namespace zeta_ladder
