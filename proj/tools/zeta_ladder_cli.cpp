// zeta-ladder: cache management, ladder tables and verification runs.
//
// Exit codes: 0 pass, 1 verification failed, 2 I/O, 3 numeric failure,
// 4 cache range exhausted, 64 usage.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "zeta_ladder/cache.hpp"
#include "zeta_ladder/error.hpp"
#include "zeta_ladder/ladder.hpp"
#include "zeta_ladder/ortho.hpp"
#include "zeta_ladder/special.hpp"
#include "zeta_ladder/verify.hpp"

namespace zl = zeta_ladder;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitIo = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitRange = 4;
constexpr int kExitUsage = 64;

constexpr const char* kDefaultCache = "zeta_ladder.cache";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct Common {
    std::string cache;
    std::string out;
    std::string format;
    double tol = 0.0;
    unsigned threads = 0;
    double c0 = 0.0;
    double tol_root = 1e-8;
    bool quiet = false;
};

struct Params {
    std::vector<double> T_list;
    double T = 0.0;
    double H = 1.0;
    double l = 1.0;
    double omega = 1.0;
    int k = 1;
    int N = 5;
    std::string system = "fourier";
    double alpha = 0.0;
    double beta = 0.0;
    int order = 0;
    std::string f = "one";
    bool literal_jacobi = false;
    // cache build
    double t_max = 0.0;
    double step = 0.25;
    double build_tol = 1e-10;
    bool force = false;
};

std::string resolve_cache(const Common& c) {
    if (!c.cache.empty()) return c.cache;
    if (const char* env = std::getenv("ZETA_LADDER_CACHE"); env != nullptr && *env != '\0') return env;
    return kDefaultCache;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw UsageError(what);
}

void check_T(double T) { require(std::isfinite(T) && T >= 100.0, "--T must be finite and >= 100"); }

void check_k(int k, int lo) {
    require(k >= lo && k <= 8, "--k must be in [" + std::to_string(lo) + ", 8]");
}

zl::ProgressFn progress_printer(const Common& c, const char* label) {
    if (c.quiet) return {};
    auto last = std::make_shared<std::size_t>(0);
    return [label, last](std::size_t done, std::size_t total) {
        if (done != total && done - *last < total / 50 + 1) return;
        *last = done;
        std::cerr << label << ' ' << done << '/' << total << '\n';
    };
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path, std::ios::trunc);
            if (!file_) throw zl::Error(zl::ErrorKind::storage, "cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
    void finish() {
        stream().flush();
        if (!stream()) throw zl::Error(zl::ErrorKind::storage, "write failed");
    }

private:
    std::ofstream file_;
};

json check(const std::string& name, double value, double limit, bool passed) {
    return json{{"name", name}, {"value", value}, {"op", "<="}, {"limit", limit}, {"passed", passed}};
}

json band(const std::string& name, double value, double lo, double hi) {
    const bool ok = value >= lo && value <= hi;
    return json{{"name", name}, {"value", value}, {"op", "in"}, {"limit", json::array({lo, hi})}, {"passed", ok}};
}

json flag(const std::string& name, bool value) {
    return json{{"name", name}, {"value", value}, {"op", "=="}, {"limit", true}, {"passed", value}};
}

bool all_passed(const json& checks) {
    for (const auto& c : checks) {
        if (!c["passed"].get<bool>()) return false;
    }
    return true;
}

json matrix_json(const std::vector<std::vector<double>>& m) {
    json a = json::array();
    for (const auto& row : m) a.push_back(row);
    return a;
}

void emit_checks_csv(std::ostream& os, const json& checks) {
    os << "check,value,limit_lo,limit_hi,passed\n";
    for (const auto& c : checks) {
        os << c["name"].get<std::string>() << ',';
        if (c["value"].is_boolean()) {
            os << (c["value"].get<bool>() ? 1 : 0);
        } else {
            os << g17(c["value"].get<double>());
        }
        os << ',';
        if (c["limit"].is_array()) {
            os << g17(c["limit"][0].get<double>()) << ',' << g17(c["limit"][1].get<double>());
        } else if (c["limit"].is_boolean()) {
            os << "1,1";
        } else {
            os << ',' << g17(c["limit"].get<double>());
        }
        os << ',' << (c["passed"].get<bool>() ? 1 : 0) << '\n';
    }
}

int emit_report(const Common& c, json report) {
    const bool passed = all_passed(report["checks"]);
    report["passed"] = passed;
    Output out(c.out);
    if (c.format == "csv") {
        emit_checks_csv(out.stream(), report["checks"]);
    } else {
        out.stream() << report.dump(2) << '\n';
    }
    out.finish();
    return passed ? kExitPass : kExitFail;
}

json report_header(const std::string& kind, json params) {
    return json{{"tool", "zeta-ladder"}, {"kind", kind}, {"params", std::move(params)}};
}

zl::Ladder open_ladder(const Common& c) {
    const std::string path = resolve_cache(c);
    auto cache = std::make_shared<const zl::CumulativeCache>(zl::load_cache(path));
    zl::LadderConfig cfg;
    cfg.c0 = c.c0;
    cfg.tol_root = c.tol_root;
    return zl::Ladder(cache, cfg);
}

zl::VerifyOptions verify_options(const Common& c) {
    zl::VerifyOptions o;
    o.tol = c.tol;
    o.threads = c.threads;
    o.progress = progress_printer(c, "panels");
    return o;
}

int cmd_cache_build(const Common& c, const Params& p) {
    require(std::isfinite(p.t_max) && p.t_max > 0.0, "--tmax must be > 0");
    require(p.step > 0.0 && p.step <= 1.0, "--step must be in (0, 1]");
    require(p.build_tol > 0.0, "--tol must be > 0");
    const std::string path = resolve_cache(c);
    if (std::filesystem::exists(path) && !p.force) {
        std::cerr << "zeta-ladder: cache '" << path << "' exists; pass --force to rebuild\n";
        return kExitIo;
    }
    const auto start = std::chrono::steady_clock::now();
    const auto cache = zl::build_cache(p.t_max, p.step, p.build_tol, c.threads, progress_printer(c, "cache panels"));
    zl::save_cache(cache, path);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "cache " << path << ": " << cache.size() << " grid points, step " << g17(cache.step())
              << ", t_max " << g17(cache.t_max()) << ", I(t_max) " << g17(cache.integral_at(cache.size() - 1))
              << ", " << g17(secs) << " s\n";
    return kExitPass;
}

int cmd_ladder(const Common& c, const Params& p) {
    require(!p.T_list.empty(), "--T is required");
    for (double T : p.T_list) check_T(T);
    check_k(p.k, 0);
    require(std::isfinite(p.H) && p.H > 0.0, "--H must be > 0");
    const zl::Ladder ladder = open_ladder(c);
    const double gamma = ladder.config().euler_gamma;

    std::vector<std::string> columns{"T", "phi1", "complement", "complement_ratio"};
    for (int r = 1; r <= p.k; ++r) {
        columns.push_back("T" + std::to_string(r));
        columns.push_back("gap" + std::to_string(r));
        columns.push_back("gap_ratio" + std::to_string(r));
    }
    json rows = json::array();
    json checks = json::array();
    for (double T : p.T_list) {
        const auto point = ladder.phi1(T);
        const double complement = T - point.phi1;
        std::vector<double> row{T, point.phi1, complement, complement * std::log(T) / ((1.0 - gamma) * T)};
        if (p.k > 0) {
            const auto rep = zl::gap_stats(ladder.reverse_iterate(T, p.H, p.k), ladder.config());
            for (int r = 1; r <= p.k; ++r) {
                const auto& g = rep.rows[static_cast<std::size_t>(r)];
                row.push_back(g.low);
                row.push_back(*g.gap);
                row.push_back(*g.gap_ratio);
            }
            checks.push_back(flag("ordered_T=" + g17(T), rep.ordered));
            checks.push_back(flag("disjoint_T=" + g17(T), rep.disjoint));
        }
        rows.push_back(row);
    }

    const bool passed = all_passed(checks);
    Output out(c.out);
    if (c.format == "json") {
        json report = report_header("ladder", json{{"T", p.T_list}, {"k", p.k}, {"H", p.H}, {"c0", c.c0},
                                                   {"tol_root", c.tol_root}, {"cache", resolve_cache(c)}});
        report["results"] = json{{"columns", columns}, {"rows", rows}};
        report["checks"] = checks;
        report["passed"] = passed;
        out.stream() << report.dump(2) << '\n';
    } else {
        for (std::size_t i = 0; i < columns.size(); ++i) out.stream() << (i ? "," : "") << columns[i];
        out.stream() << '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out.stream() << (i ? "," : "") << g17(row[i].get<double>());
            out.stream() << '\n';
        }
    }
    out.finish();
    return passed ? kExitPass : kExitFail;
}

std::function<double(double)> test_function(const std::string& name, double T, double l) {
    if (name == "one") return [](double) { return 1.0; };
    if (name == "affine") return [T](double t) { return t - T; };
    return [T, l](double t) { return std::cos(std::numbers::pi * (t - T) / l); };
}

int cmd_substitution(const Common& c, const Params& p, bool l_given) {
    check_T(p.T);
    check_k(p.k, 1);
    require(std::isfinite(p.H) && p.H > 0.0, "--H must be > 0");
    const double l = l_given ? p.l : 0.5 * p.H;
    require(l > 0.0, "--l must be > 0");
    const zl::Ladder ladder = open_ladder(c);
    const auto opts = verify_options(c);
    const auto rep = zl::verify_substitution(test_function(p.f, p.T, l), p.T, p.H, p.k, ladder, opts);

    json report = report_header("substitution", json{{"f", p.f}, {"T", p.T}, {"H", p.H}, {"k", p.k}, {"l", l}});
    report["results"] = json{{"segment", {rep.segment_lo, rep.segment_hi}},
                             {"lhs", rep.lhs},
                             {"lhs_error", rep.lhs_error},
                             {"rhs", rep.rhs},
                             {"rhs_error", rep.rhs_error},
                             {"abs_diff", rep.abs_diff},
                             {"rel_diff", rep.rel_diff},
                             {"tol", rep.tol},
                             {"evaluations", rep.evaluations}};
    report["checks"] = json::array({check("abs_diff", rep.abs_diff, rep.limit, rep.abs_diff <= rep.limit),
                                    flag("quadrature_converged", rep.converged)});
    return emit_report(c, std::move(report));
}

zl::BaseSystem make_system(const Params& p, bool l_given) {
    if (p.system == "fourier") return zl::BaseSystem::fourier(p.l);
    if (p.system == "jacobi") {
        require(!l_given || p.l == 1.0, "--l is fixed to 1 for the jacobi system");
        require(p.alpha > -1.0 && p.beta > -1.0, "--alpha and --beta must be > -1");
        return zl::BaseSystem::jacobi(p.alpha, p.beta);
    }
    require(p.order >= 0 && p.order <= 100, "--order must be in [0, 100]");
    return zl::BaseSystem::bessel(p.order, p.l);
}

int cmd_gram(const Common& c, const Params& p, bool l_given) {
    check_T(p.T);
    check_k(p.k, 1);
    require(p.N >= 1 && p.N <= zl::kGramMaxN, "--N must be in [1, " + std::to_string(zl::kGramMaxN) + "]");
    require(std::isfinite(p.l) && p.l > 0.0, "--l must be > 0");
    if (p.system == "bessel") require(p.N <= zl::special::kBesselMaxZeroIndex, "--N exceeds the bessel zero table");
    const zl::BaseSystem base = make_system(p, l_given);
    const zl::Ladder ladder = open_ladder(c);
    const zl::LiftedSystem ls(base, p.T, p.k, ladder,
                              p.literal_jacobi ? zl::JacobiArgument::literal : zl::JacobiArgument::pullback);
    const auto rep = zl::gram_matrix(ls, p.N, verify_options(c));

    const double diag_limit = base.kind() == zl::SystemKind::fourier ? 1e-6 : 1e-5;
    const double off_limit = 1e-6;
    json params{{"system", base.describe()}, {"N", p.N}, {"T", p.T}, {"k", p.k}, {"l", base.l()}};
    if (p.literal_jacobi) params["jacobi_argument"] = "literal";
    json report = report_header("gram", params);
    report["results"] = json{{"segment", {rep.segment_lo, rep.segment_hi}},
                             {"indices", rep.indices},
                             {"matrix", matrix_json(rep.matrix)},
                             {"errors", matrix_json(rep.errors)},
                             {"norms_expected", rep.norms_expected.A},
                             {"max_offdiag_rel", rep.max_offdiag_rel},
                             {"max_diag_rel_err", rep.max_diag_rel_err},
                             {"tol", rep.tol},
                             {"evaluations", rep.evaluations},
                             {"panels", rep.panels}};
    report["checks"] = json::array({check("max_offdiag_rel", rep.max_offdiag_rel, off_limit,
                                          rep.max_offdiag_rel <= off_limit),
                                    check("max_diag_rel_err", rep.max_diag_rel_err, diag_limit,
                                          rep.max_diag_rel_err <= diag_limit),
                                    flag("quadrature_converged", rep.converged)});
    if (c.format == "csv") {
        const bool passed = all_passed(report["checks"]);
        Output out(c.out);
        out.stream() << "m,n,value,error,expected\n";
        for (int a = 0; a < rep.N; ++a) {
            for (int b = 0; b < rep.N; ++b) {
                const auto ia = static_cast<std::size_t>(a);
                const auto ib = static_cast<std::size_t>(b);
                out.stream() << rep.indices[ia] << ',' << rep.indices[ib] << ',' << g17(rep.matrix[ia][ib]) << ','
                             << g17(rep.errors[ia][ib]) << ',' << g17(a == b ? rep.norms_expected.A[ia] : 0.0)
                             << '\n';
            }
        }
        out.finish();
        return passed ? kExitPass : kExitFail;
    }
    return emit_report(c, std::move(report));
}

json moment_results(const zl::MomentReport& rep) {
    return json{{"segment", {rep.segment_lo, rep.segment_hi}},
                {"value", rep.quad.value},
                {"error_estimate", rep.quad.error_estimate},
                {"reference", rep.reference},
                {"ratio", rep.ratio},
                {"tol", rep.tol},
                {"evaluations", rep.quad.evaluations},
                {"panels", rep.quad.panels}};
}

// Asymptotic acceptance bands for the zeta moments, by depth k.
std::pair<double, double> moment_band(int k) { return k <= 1 ? std::pair{0.8, 1.2} : std::pair{0.7, 1.3}; }

int cmd_moment(const Common& c, const Params& p, const std::string& kind) {
    check_T(p.T);
    require(std::isfinite(p.l) && p.l > 0.0, "--l must be > 0");
    const zl::Ladder ladder = open_ladder(c);
    const auto opts = verify_options(c);
    json report = report_header(kind, json{{"T", p.T}, {"k", p.k}, {"l", p.l}});
    json checks = json::array();
    if (kind == "moment-exact") {
        check_k(p.k, 1);
        const auto rep = zl::moment_exact(p.T, p.k, p.l, ladder, opts);
        report["results"] = moment_results(rep);
        const double err = std::abs(rep.ratio - 1.0);
        checks.push_back(check("rel_err", err, 1e-6, err <= 1e-6));
        checks.push_back(flag("quadrature_converged", rep.converged));
    } else {
        check_k(p.k, 0);
        const auto rep = zl::moment_zeta(p.T, p.k, p.l, ladder, opts);
        report["results"] = moment_results(rep);
        if (p.k == 0) {
            report["results"]["cross_check"] = rep.cross_check;
            const double err = std::abs(rep.quad.value - rep.cross_check) / rep.cross_check;
            checks.push_back(check("cross_check_rel_err", err, 1e-8, err <= 1e-8));
        } else {
            const auto [lo, hi] = moment_band(p.k);
            checks.push_back(band("ratio", rep.ratio, lo, hi));
        }
        checks.push_back(flag("quadrature_converged", rep.converged));
    }
    report["checks"] = checks;
    return emit_report(c, std::move(report));
}

int cmd_corollary(const Common& c, const Params& p) {
    check_T(p.T);
    check_k(p.k, 1);
    const double bound = 0.01 * p.T * std::pow(std::log(p.T), p.k - 1);
    require(std::isfinite(p.omega) && p.omega > 0.0 && p.omega <= bound,
            "--omega must be in (0, " + g17(bound) + "]");
    const zl::Ladder ladder = open_ladder(c);
    const auto rep = zl::corollary_46(p.T, p.k, p.omega, ladder, verify_options(c));
    json report = report_header("corollary46", json{{"T", p.T}, {"k", p.k}, {"omega", p.omega}});
    report["results"] = moment_results(rep);
    report["results"]["l"] = rep.l;
    const auto [lo, hi] = moment_band(p.k);
    report["checks"] = json::array({band("ratio", rep.ratio, lo, hi), flag("quadrature_converged", rep.converged)});
    return emit_report(c, std::move(report));
}

int exit_code_for(const zl::Error& e) {
    switch (e.kind()) {
        case zl::ErrorKind::storage:
        case zl::ErrorKind::checksum: return kExitIo;
        case zl::ErrorKind::cache_exhausted: return kExitRange;
        default: return kExitNumeric;
    }
}

void add_common(CLI::App* app, Common& c, bool with_format) {
    app->add_option("--cache", c.cache, "Cache file (default: $ZETA_LADDER_CACHE or ./zeta_ladder.cache)");
    app->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
    app->add_flag("--quiet", c.quiet, "Suppress progress on stderr");
    if (with_format) {
        app->add_option("--out", c.out, "Output file (default: stdout)");
        app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        app->add_option("--c0", c.c0, "Additive constant of the ladder equation");
        app->add_option("--tol-root", c.tol_root, "Ladder root tolerance")->check(CLI::PositiveNumber);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Jacob's ladder on the critical line: cache, tables and verification"};
    app.require_subcommand(1);
    Common c;
    Params p;

    auto* cache_cmd = app.add_subcommand("cache", "Cumulative integral cache");
    cache_cmd->require_subcommand(1);
    auto* build = cache_cmd->add_subcommand("build", "Build and persist the cache");
    add_common(build, c, false);
    build->add_option("--tmax", p.t_max, "Largest ordinate covered")->required();
    build->add_option("--step", p.step, "Grid spacing");
    build->add_option("--tol", p.build_tol, "Relative tolerance per panel");
    build->add_flag("--force", p.force, "Overwrite an existing cache");

    auto* ladder_cmd = app.add_subcommand("ladder", "phi1 and reverse-iteration table");
    add_common(ladder_cmd, c, true);
    ladder_cmd->add_option("--T", p.T_list, "Ordinates (repeatable)")->required();
    ladder_cmd->add_option("--k", p.k, "Reverse iterations");
    ladder_cmd->add_option("--H", p.H, "Segment length");

    auto* verify = app.add_subcommand("verify", "Verification runs");
    verify->require_subcommand(1);
    std::string kind;
    auto add_verify = [&](const std::string& name, const std::string& help) {
        auto* sub = verify->add_subcommand(name, help);
        add_common(sub, c, true);
        sub->add_option("--tol", c.tol, "Quadrature tolerance (default 1e-8, 1e-6 for k >= 2)");
        sub->add_option("--T", p.T, "Base ordinate")->required();
        sub->add_option("--k", p.k, "Depth of the reverse iteration");
        sub->callback([&kind, name] { kind = name; });
        return sub;
    };
    std::vector<CLI::Option*> l_options;
    auto* sub_subst = add_verify("substitution", "Change of variables along the ladder");
    sub_subst->add_option("--H", p.H, "Interval length");
    sub_subst->add_option("--f", p.f, "Test function")->check(CLI::IsMember({"one", "affine", "cosine"}));
    l_options.push_back(sub_subst->add_option("--l", p.l, "Half period of the cosine test function"));
    auto* sub_gram = add_verify("gram", "Gram matrix of a lifted system");
    sub_gram->add_option("--N", p.N, "Number of members");
    sub_gram->add_option("--system", p.system, "Base system")->check(CLI::IsMember({"fourier", "jacobi", "bessel"}));
    sub_gram->add_option("--alpha", p.alpha, "Jacobi alpha");
    sub_gram->add_option("--beta", p.beta, "Jacobi beta");
    sub_gram->add_option("--order", p.order, "Bessel order");
    sub_gram->add_flag("--literal-jacobi", p.literal_jacobi, "Use the unmapped Jacobi argument t - T - 1");
    l_options.push_back(sub_gram->add_option("--l", p.l, "Half-length of the base interval"));
    auto* sub_exact = add_verify("moment-exact", "Normalised moment, equals 2l");
    l_options.push_back(sub_exact->add_option("--l", p.l, "Half-length"));
    auto* sub_zeta = add_verify("moment-zeta", "Zeta moment against 2l ln^k T");
    l_options.push_back(sub_zeta->add_option("--l", p.l, "Half-length"));
    auto* sub_cor = add_verify("corollary46", "Zeta moment with 2l = Omega / ln^k T");
    sub_cor->add_option("--omega", p.omega, "Target Omega");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    bool l_given = false;
    for (auto* o : l_options) l_given = l_given || o->count() > 0;
    if (c.format.empty()) c.format = ladder_cmd->parsed() ? "csv" : "json";

    try {
        if (build->parsed()) return cmd_cache_build(c, p);
        if (ladder_cmd->parsed()) return cmd_ladder(c, p);
        if (kind == "substitution") return cmd_substitution(c, p, l_given);
        if (kind == "gram") return cmd_gram(c, p, l_given);
        if (kind == "moment-exact" || kind == "moment-zeta") return cmd_moment(c, p, kind);
        if (kind == "corollary46") return cmd_corollary(c, p);
        std::cerr << "zeta-ladder: no command\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "zeta-ladder: " << e.what() << '\n';
        return kExitUsage;
    } catch (const zl::CacheExhaustedError& e) {
        std::cerr << "zeta-ladder: " << e.what() << "\nrequired t_max: " << g17(e.required_t_max()) << '\n';
        return kExitRange;
    } catch (const zl::Error& e) {
        std::cerr << "zeta-ladder: " << zl::to_string(e.kind()) << " error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "zeta-ladder: " << e.what() << '\n';
        return kExitNumeric;
    }
}
