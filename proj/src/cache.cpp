#include "zeta_ladder/cache.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string_view>

#include "zeta_ladder/error.hpp"
#include "zeta_ladder/parallel.hpp"
#include "zeta_ladder/zeta.hpp"

namespace zeta_ladder {

namespace {

constexpr std::string_view kMagic = "# zeta-ladder-cache v";
constexpr std::string_view kTrailer = "# end rows=";

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

// Tail tolerance for the final partial panel. Z itself carries ~1e-10
// relative rounding noise at t ~ 1e5 (the Riemann-Siegel phases are ~t ln t),
// so tighter requests only burn the panel budget.
constexpr double kTailTol = 1e-10;

void fnv_update(std::uint64_t& h, std::string_view bytes) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= kFnvPrime;
    }
}

std::string shortest(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

double parse_double(std::string_view s, const std::string& what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error(ErrorKind::storage, "cache: malformed " + what + " '" + std::string(s) + "'");
    }
    return v;
}

std::string_view field(std::string_view line, std::string_view key) {
    const auto pos = line.find(key);
    if (pos == std::string_view::npos) return {};
    auto rest = line.substr(pos + key.size());
    return rest.substr(0, rest.find(' '));
}

double z_squared(double t) { return hardy_z(t).abs_zeta_sq; }

}  // namespace

std::string cache_row(double t, double integral) {
    char buf[80];
    char* p = buf;
    p = std::to_chars(p, buf + sizeof buf, t, std::chars_format::general, 17).ptr;
    *p++ = ',';
    p = std::to_chars(p, buf + sizeof buf, integral, std::chars_format::general, 17).ptr;
    return std::string(buf, p);
}

CumulativeCache::CumulativeCache(double step, std::vector<double> integrals)
    : step_(step), integrals_(std::move(integrals)), checksum_(kFnvOffset) {
    if (!(step_ > 0.0) || !std::isfinite(step_)) throw Error(ErrorKind::domain, "cache: step must be > 0");
    if (integrals_.size() < 2) throw Error(ErrorKind::domain, "cache: needs at least two grid points");
    if (integrals_.front() != 0.0) throw Error(ErrorKind::domain, "cache: I_0 must be 0");
    for (std::size_t i = 1; i < integrals_.size(); ++i) {
        if (!(integrals_[i] > integrals_[i - 1])) {
            throw Error(ErrorKind::domain, "cache: cumulative integral not strictly increasing at index " +
                                               std::to_string(i));
        }
    }
    for (std::size_t i = 0; i < integrals_.size(); ++i) {
        fnv_update(checksum_, cache_row(t_at(i), integrals_[i]));
        fnv_update(checksum_, "\n");
    }
}

std::size_t CumulativeCache::index_below(double t) const noexcept {
    auto i = static_cast<std::size_t>(std::floor(t / step_));
    if (i >= integrals_.size()) i = integrals_.size() - 1;
    while (i > 0 && t_at(i) > t) --i;
    while (i + 1 < integrals_.size() && t_at(i + 1) <= t) ++i;
    return i;
}

CumulativeCache build_cache(double t_max, double step, double tol, unsigned threads,
                            const ProgressFn& progress) {
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw Error(ErrorKind::domain, "build_cache: t_max must be > 0");
    if (!(step > 0.0) || step > 1.0) throw Error(ErrorKind::domain, "build_cache: step must be in (0, 1]");
    if (!(tol > 0.0)) throw Error(ErrorKind::domain, "build_cache: tol must be > 0");

    auto panels = static_cast<std::size_t>(std::ceil(t_max / step));
    if (panels > 0 && static_cast<double>(panels - 1) * step >= t_max) --panels;
    if (static_cast<double>(panels) * step < t_max) ++panels;

    std::vector<double> pieces(panels);
    constexpr std::size_t kChunk = 256;
    const std::size_t chunks = (panels + kChunk - 1) / kChunk;
    std::size_t done = 0;
    std::mutex progress_guard;
    parallel_for(chunks, threads, [&](std::size_t c) {
        const std::size_t lo = c * kChunk;
        const std::size_t hi = std::min(panels, lo + kChunk);
        for (std::size_t i = lo; i < hi; ++i) {
            QuadOptions options;
            options.tol = tol;
            options.max_panels = 512;
            pieces[i] = integrate(z_squared, static_cast<double>(i) * step, static_cast<double>(i + 1) * step,
                                  options)
                            .value;
        }
        if (progress) {
            std::lock_guard lock(progress_guard);
            done += hi - lo;
            progress(done, panels);
        }
    });

    std::vector<double> integrals(panels + 1);
    integrals[0] = 0.0;
    for (std::size_t i = 0; i < panels; ++i) {
        if (!(pieces[i] > 0.0)) {
            throw Error(ErrorKind::accuracy,
                        "build_cache: non-positive panel integral at t = " + shortest(static_cast<double>(i) * step));
        }
        integrals[i + 1] = integrals[i] + pieces[i];
    }
    return CumulativeCache(step, std::move(integrals));
}

void save_cache(const CumulativeCache& cache, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::storage, "cache: cannot open '" + path.string() + "' for writing");
    out << kMagic << CumulativeCache::kVersion << " step=" << shortest(cache.step())
        << " tmax=" << shortest(cache.t_max()) << '\n';
    for (std::size_t i = 0; i < cache.size(); ++i) out << cache_row(cache.t_at(i), cache.integral_at(i)) << '\n';
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(cache.checksum()));
    out << kTrailer << cache.size() << " checksum=" << hex << '\n';
    out.flush();
    if (!out) throw Error(ErrorKind::storage, "cache: write to '" + path.string() + "' failed");
}

CumulativeCache load_cache(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::storage, "cache: cannot open '" + path.string() + "'");

    std::string line;
    if (!std::getline(in, line) || !std::string_view(line).starts_with(kMagic)) {
        throw Error(ErrorKind::storage, "cache: '" + path.string() + "' is not a zeta-ladder cache");
    }
    const std::string_view header(line);
    const auto version_text = header.substr(kMagic.size(), header.find(' ', kMagic.size()) - kMagic.size());
    if (version_text != std::to_string(CumulativeCache::kVersion)) {
        throw Error(ErrorKind::storage, "cache: unsupported version '" + std::string(version_text) + "'");
    }
    const double step = parse_double(field(header, "step="), "step");
    const double tmax = parse_double(field(header, "tmax="), "tmax");

    std::vector<double> integrals;
    std::uint64_t hash = kFnvOffset;
    bool trailer_seen = false;
    std::size_t trailer_rows = 0;
    std::uint64_t trailer_hash = 0;
    while (std::getline(in, line)) {
        const std::string_view row(line);
        if (row.starts_with(kTrailer)) {
            trailer_rows = static_cast<std::size_t>(parse_double(field(row, "rows="), "row count"));
            const auto hex = field(row, "checksum=");
            auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), trailer_hash, 16);
            if (ec != std::errc() || hex.size() != 16) throw Error(ErrorKind::checksum, "cache: malformed checksum");
            trailer_seen = true;
            break;
        }
        fnv_update(hash, row);
        fnv_update(hash, "\n");
        const auto comma = row.find(',');
        if (comma == std::string_view::npos) {
            throw Error(ErrorKind::checksum, "cache: corrupted row " + std::to_string(integrals.size()));
        }
        double t = 0.0;
        double value = 0.0;
        try {
            t = parse_double(row.substr(0, comma), "t");
            value = parse_double(row.substr(comma + 1), "I");
        } catch (const Error&) {
            throw Error(ErrorKind::checksum, "cache: corrupted row " + std::to_string(integrals.size()));
        }
        if (t != static_cast<double>(integrals.size()) * step) {
            throw Error(ErrorKind::checksum, "cache: grid mismatch at row " + std::to_string(integrals.size()));
        }
        integrals.push_back(value);
    }
    if (!trailer_seen) throw Error(ErrorKind::checksum, "cache: missing trailer (truncated file)");
    if (trailer_rows != integrals.size() || trailer_hash != hash) {
        throw Error(ErrorKind::checksum, "cache: checksum mismatch in '" + path.string() + "'");
    }
    CumulativeCache cache = [&] {
        try {
            return CumulativeCache(step, std::move(integrals));
        } catch (const Error& e) {
            throw Error(ErrorKind::checksum, std::string("cache: invalid contents: ") + e.what());
        }
    }();
    if (cache.t_max() != tmax) throw Error(ErrorKind::checksum, "cache: header tmax does not match rows");
    return cache;
}

double hl_integral(double T, const CumulativeCache& cache) {
    if (!std::isfinite(T) || T < 0.0) throw Error(ErrorKind::domain, "hl_integral: T must be finite and >= 0");
    if (T > cache.t_max()) {
        throw CacheExhaustedError(T, "hl_integral: T = " + shortest(T) + " exceeds cache t_max = " +
                                         shortest(cache.t_max()) + "; rebuild with tmax >= " + shortest(T));
    }
    const std::size_t i = cache.index_below(T);
    const double base = cache.integral_at(i);
    const double t_i = cache.t_at(i);
    if (T == t_i) return base;
    QuadOptions options;
    options.tol = kTailTol;
    options.max_panels = 256;
    options.throw_on_budget = false;
    return base + integrate(z_squared, t_i, T, options).value;
}

}  // namespace zeta_ladder
