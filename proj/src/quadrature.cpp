#include "zeta_ladder/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <string>

#include "zeta_ladder/error.hpp"

namespace zeta_ladder {

namespace {

constexpr int kNodes = 15;

// Kronrod abscissae, descending; odd entries are the embedded Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
    double a = 0.0;
    double b = 0.0;
    std::vector<double> value;
    std::vector<double> error;
};

// Node order inside a panel: center, then (-x_j, +x_j) for j = 0..6.
void panel_nodes(double a, double b, std::span<double> out) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    out[0] = c;
    for (int j = 0; j < 7; ++j) {
        out[1 + 2 * j] = c - h * kXgk[j];
        out[2 + 2 * j] = c + h * kXgk[j];
    }
}

void apply_rule(Panel& p, std::span<const double> f, std::size_t dim) {
    const double h = 0.5 * (p.b - p.a);
    p.value.assign(dim, 0.0);
    p.error.assign(dim, 0.0);
    for (std::size_t d = 0; d < dim; ++d) {
        auto at = [&](int node) { return f[node * dim + d]; };
        const double fc = at(0);
        double resk = kWgk[7] * fc;
        double resg = kWg[3] * fc;
        double resabs = std::abs(resk);
        for (int j = 0; j < 7; ++j) {
            const double f1 = at(1 + 2 * j);
            const double f2 = at(2 + 2 * j);
            resk += kWgk[j] * (f1 + f2);
            resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
            if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
        }
        const double mean = 0.5 * resk;
        double resasc = kWgk[7] * std::abs(fc - mean);
        for (int j = 0; j < 7; ++j) {
            resasc += kWgk[j] * (std::abs(at(1 + 2 * j) - mean) + std::abs(at(2 + 2 * j) - mean));
        }
        resk *= h;
        resabs *= std::abs(h);
        resasc *= std::abs(h);
        double err = std::abs((resk - resg * h));
        if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
        if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
        p.value[d] = resk;
        p.error[d] = err;
    }
}

class Evaluator {
public:
    Evaluator(const BatchIntegrand& f, std::size_t dim) : f_(f), dim_(dim) {}

    void evaluate(std::span<Panel> panels) {
        const std::size_t count = panels.size() * kNodes;
        x_.resize(count);
        y_.assign(count * dim_, 0.0);
        for (std::size_t i = 0; i < panels.size(); ++i) {
            panel_nodes(panels[i].a, panels[i].b, std::span<double>(x_).subspan(i * kNodes, kNodes));
        }
        f_(x_, y_);
        evaluations_ += static_cast<long>(count);
        for (std::size_t i = 0; i < count * dim_; ++i) {
            if (!std::isfinite(y_[i])) {
                const double x = x_[i / dim_];
                std::ostringstream msg;
                msg.precision(17);
                msg << "integrand returned a non-finite value at x = " << x;
                throw QuadratureError(ErrorKind::evaluation, std::numeric_limits<double>::quiet_NaN(), x,
                                      msg.str());
            }
        }
        for (std::size_t i = 0; i < panels.size(); ++i) {
            apply_rule(panels[i], std::span<const double>(y_).subspan(i * kNodes * dim_, kNodes * dim_),
                       dim_);
        }
    }

    [[nodiscard]] long evaluations() const { return evaluations_; }

private:
    const BatchIntegrand& f_;
    std::size_t dim_;
    std::vector<double> x_;
    std::vector<double> y_;
    long evaluations_ = 0;
};

}  // namespace

VectorQuadResult integrate_batch(const BatchIntegrand& f, std::size_t dim, double a, double b,
                                 const QuadOptions& options) {
    if (!std::isfinite(a) || !std::isfinite(b) || a > b) {
        throw Error(ErrorKind::domain, "integrate: requires finite a <= b");
    }
    if (!(options.tol > 0.0)) throw Error(ErrorKind::domain, "integrate: tol must be > 0");
    if (dim == 0) throw Error(ErrorKind::domain, "integrate: dimension must be >= 1");

    VectorQuadResult result;
    result.values.assign(dim, 0.0);
    result.error_estimates.assign(dim, 0.0);
    if (a == b) return result;

    std::vector<double> cuts{a};
    std::vector<double> inner;
    for (double x : options.breakpoints) {
        if (x > a && x < b) inner.push_back(x);
    }
    std::sort(inner.begin(), inner.end());
    inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
    cuts.insert(cuts.end(), inner.begin(), inner.end());
    cuts.push_back(b);

    const int per_piece = std::max(1, options.initial_panels);
    std::vector<Panel> panels;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double w = (cuts[i + 1] - cuts[i]) / per_piece;
        for (int j = 0; j < per_piece; ++j) {
            Panel p;
            p.a = cuts[i] + j * w;
            p.b = j + 1 == per_piece ? cuts[i + 1] : cuts[i] + (j + 1) * w;
            panels.push_back(std::move(p));
        }
    }

    Evaluator eval(f, dim);
    eval.evaluate(panels);

    std::vector<double> total(dim, 0.0);
    std::vector<double> total_err(dim, 0.0);
    auto resum = [&] {
        std::fill(total.begin(), total.end(), 0.0);
        std::fill(total_err.begin(), total_err.end(), 0.0);
        for (const auto& p : panels) {
            for (std::size_t d = 0; d < dim; ++d) {
                total[d] += p.value[d];
                total_err[d] += p.error[d];
            }
        }
    };
    resum();

    auto priority = [&](const Panel& p) {
        if (p.b - p.a <= 8.0 * kEps * std::max(std::abs(p.a), std::abs(p.b))) return 0.0;
        double worst = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            worst = std::max(worst, p.error[d] / std::max(1.0, std::abs(total[d])));
        }
        return worst;
    };
    auto converged = [&] {
        for (std::size_t d = 0; d < dim; ++d) {
            if (total_err[d] > options.tol * std::max(1.0, std::abs(total[d]))) return false;
        }
        return true;
    };

    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry> heap;
    for (std::size_t i = 0; i < panels.size(); ++i) heap.emplace(priority(panels[i]), i);

    const std::size_t budget = static_cast<std::size_t>(std::max(options.max_panels, 1));
    bool ok = converged();
    while (!ok && panels.size() < budget && !heap.empty()) {
        const auto [prio, idx] = heap.top();
        if (prio <= 0.0) break;
        heap.pop();

        std::array<Panel, 2> kids;
        const double mid = 0.5 * (panels[idx].a + panels[idx].b);
        kids[0].a = panels[idx].a;
        kids[0].b = mid;
        kids[1].a = mid;
        kids[1].b = panels[idx].b;
        eval.evaluate(kids);

        for (std::size_t d = 0; d < dim; ++d) {
            total[d] += kids[0].value[d] + kids[1].value[d] - panels[idx].value[d];
            total_err[d] += kids[0].error[d] + kids[1].error[d] - panels[idx].error[d];
        }
        panels[idx] = std::move(kids[0]);
        panels.push_back(std::move(kids[1]));
        heap.emplace(priority(panels[idx]), idx);
        heap.emplace(priority(panels.back()), panels.size() - 1);

        if (options.progress && panels.size() % 64 == 0) options.progress(panels.size(), budget);
        ok = converged();
        if (ok) {
            resum();
            ok = converged();
        }
    }
    resum();
    ok = converged();

    result.values = total;
    result.error_estimates = total_err;
    result.evaluations = eval.evaluations();
    result.panels = static_cast<int>(panels.size());
    result.converged = ok;
    if (!ok && options.throw_on_budget) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "integrate: tolerance " << options.tol << " not reached on [" << a << ", " << b << "] with "
            << panels.size() << " panels; best estimate " << total[0] << " +- " << total_err[0];
        throw QuadratureError(ErrorKind::accuracy, total[0], std::numeric_limits<double>::quiet_NaN(),
                              msg.str());
    }
    return result;
}

QuadResult integrate(const std::function<double(double)>& f, double a, double b, const QuadOptions& options) {
    const BatchIntegrand batch = [&f](std::span<const double> x, std::span<double> out) {
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = f(x[i]);
    };
    const auto r = integrate_batch(batch, 1, a, b, options);
    return QuadResult{r.values[0], r.error_estimates[0], r.evaluations, r.panels};
}

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    QuadOptions options;
    options.tol = tol;
    return integrate(f, a, b, options);
}

}  // namespace zeta_ladder
