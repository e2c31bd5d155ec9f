#include "nlocal/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <thread>

#include "nlocal/error.hpp"

namespace nlocal {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInitialStep = 0.4;
// Restarts are launched in fixed-size batches when stop_above is set, so
// the early exit does not depend on the thread count.
constexpr int kStopBatch = 4;

double finite_or_lowest(double v) { return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity(); }

struct Vertex {
    std::vector<double> x;
    double f;
};

std::mt19937_64 restart_stream(std::uint64_t seed, int index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index)};
    return std::mt19937_64(seq);
}

// Stratum of each restart along each dimension; restart r falls in stratum
// strata[d][r] of m equal slices.
std::vector<std::vector<int>> latin_strata(std::uint64_t seed, int dims, int m) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0xA5A5u};
    std::mt19937_64 rng(seq);
    std::vector<std::vector<int>> strata(dims, std::vector<int>(m));
    for (auto& s : strata) {
        std::iota(s.begin(), s.end(), 0);
        std::shuffle(s.begin(), s.end(), rng);
    }
    return strata;
}

}  // namespace

void OptimizeConfig::validate() const {
    if (restarts < 1) throw InvalidArgument("restarts must be >= 1");
    if (max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
    if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be > 0");
    if (threads < 1) throw InvalidArgument("threads must be >= 1");
}

nlohmann::json to_json(const OptimumResult& r) {
    nlohmann::json j;
    j["best_value"] = r.best_value;
    j["trace"] = r.trace;
    auto settings = nlohmann::json::array();
    for (const auto& pair : r.best_settings) {
        auto party = nlohmann::json::array();
        for (const auto& d : pair) party.push_back({{"theta", d.theta}, {"phi", d.phi}});
        settings.push_back(party);
    }
    j["best_settings"] = settings;
    j["report"] = to_json(r.report);
    return j;
}

SimplexResult nelder_mead_maximize(const std::function<double(std::span<const double>)>& objective,
                                   std::vector<double> start, double step, int max_iters, double tolerance) {
    const std::size_t d = start.size();
    if (d == 0) throw InvalidArgument("nelder_mead_maximize: empty parameter vector");
    auto f = [&](const std::vector<double>& x) { return finite_or_lowest(objective(x)); };

    SimplexResult out;
    out.x = std::move(start);
    out.value = f(out.x);
    int iters = 0;
    bool rebuilt_without_gain = false;

    while (iters < max_iters && !rebuilt_without_gain) {
        std::vector<Vertex> simplex;
        simplex.reserve(d + 1);
        simplex.push_back({out.x, out.value});
        for (std::size_t i = 0; i < d; ++i) {
            auto x = out.x;
            x[i] += step;
            simplex.push_back({x, f(x)});
        }
        const double entry_value = out.value;

        std::vector<double> centroid(d), xr(d), xe(d), xc(d);
        while (iters < max_iters) {
            std::sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.f > b.f; });
            if (simplex.front().f - simplex.back().f < tolerance) break;
            ++iters;

            std::fill(centroid.begin(), centroid.end(), 0.0);
            for (std::size_t k = 0; k < d; ++k)
                for (std::size_t i = 0; i < d; ++i) centroid[i] += simplex[k].x[i];
            for (auto& c : centroid) c /= static_cast<double>(d);

            auto& worst = simplex.back();
            for (std::size_t i = 0; i < d; ++i) xr[i] = centroid[i] + (centroid[i] - worst.x[i]);
            const double fr = f(xr);

            if (fr > simplex.front().f) {
                for (std::size_t i = 0; i < d; ++i) xe[i] = centroid[i] + 2.0 * (centroid[i] - worst.x[i]);
                const double fe = f(xe);
                if (fe > fr) worst = {xe, fe};
                else worst = {xr, fr};
                continue;
            }
            if (fr > simplex[d - 1].f) {
                worst = {xr, fr};
                continue;
            }
            const bool outside = fr > worst.f;
            for (std::size_t i = 0; i < d; ++i) {
                const double far = outside ? xr[i] : worst.x[i];
                xc[i] = centroid[i] + 0.5 * (far - centroid[i]);
            }
            const double fc = f(xc);
            if (fc > std::max(fr, worst.f)) {
                worst = {xc, fc};
                continue;
            }
            const auto best = simplex.front().x;
            for (std::size_t k = 1; k <= d; ++k) {
                for (std::size_t i = 0; i < d; ++i) simplex[k].x[i] = best[i] + 0.5 * (simplex[k].x[i] - best[i]);
                simplex[k].f = f(simplex[k].x);
            }
        }
        const auto top = std::max_element(simplex.begin(), simplex.end(),
                                          [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
        if (top->f > out.value) {
            out.x = top->x;
            out.value = top->f;
        }
        rebuilt_without_gain = out.value - entry_value < tolerance;
    }
    out.iterations = iters;
    return out;
}

ExtremeSettings settings_from_parameters(std::span<const double> params) {
    if (params.size() % 4 != 0) throw InvalidArgument("parameter count must be a multiple of 4");
    ExtremeSettings s(params.size() / 4);
    for (std::size_t p = 0; p < s.size(); ++p)
        for (int k = 0; k < 2; ++k) s[p][k] = {params[4 * p + 2 * k], params[4 * p + 2 * k + 1]};
    return s;
}

std::vector<double> parameters_from_settings(const ExtremeSettings& settings) {
    std::vector<double> params;
    params.reserve(4 * settings.size());
    for (const auto& pair : settings)
        for (const auto& d : pair) {
            params.push_back(d.theta);
            params.push_back(d.phi);
        }
    return params;
}

Direction canonical(Direction d) {
    double theta = std::fmod(d.theta, kTwoPi);
    if (theta < 0.0) theta += kTwoPi;
    double phi = d.phi;
    if (theta > kPi) {
        theta = kTwoPi - theta;
        phi += kPi;
    }
    phi = std::fmod(phi, kTwoPi);
    if (phi < 0.0) phi += kTwoPi;
    return {theta, phi};
}

ExtremeSettings all_z_settings(int extremes) {
    return ExtremeSettings(extremes, {Direction{0.0, 0.0}, Direction{0.0, 0.0}});
}

ExtremeSettings zx_settings(int extremes) {
    return ExtremeSettings(extremes, {Direction{kPi / 4, 0.0}, Direction{kPi / 4, kPi}});
}

OptimumResult maximize(const CorrelatorKernel& kernel, const OptimizeConfig& cfg) {
    cfg.validate();
    const int extremes = kernel.extremes();
    const int dims = 4 * extremes;
    auto objective = [&](std::span<const double> p) { return kernel.max_lhs(settings_from_parameters(p)); };

    const auto z_start = parameters_from_settings(all_z_settings(extremes));
    const auto zx_start = parameters_from_settings(zx_settings(extremes));
    const int random_starts = std::max(0, cfg.restarts - 2);
    const auto strata = latin_strata(cfg.seed, dims, std::max(1, random_starts));

    auto start_for = [&](int r) {
        if (r == 0) {
            if (cfg.restarts == 1 && objective(zx_start) > objective(z_start)) return zx_start;
            return z_start;
        }
        if (r == 1) return zx_start;
        auto rng = restart_stream(cfg.seed, r);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<double> x(dims);
        for (int i = 0; i < dims; ++i) {
            const double width = (i % 2 == 0) ? kPi : kTwoPi;
            x[i] = width * (strata[i][r - 2] + u(rng)) / random_starts;
        }
        return x;
    };

    std::vector<SimplexResult> runs(cfg.restarts);
    std::vector<char> done(cfg.restarts, 0);
    auto run_one = [&](int r) {
        runs[r] = nelder_mead_maximize(objective, start_for(r), kInitialStep, cfg.max_iters, cfg.tolerance);
        done[r] = 1;
    };
    auto run_range = [&](int begin, int end) {
        const int workers = std::min(cfg.threads, end - begin);
        if (workers <= 1) {
            for (int r = begin; r < end; ++r) run_one(r);
            return;
        }
        std::atomic<int> next{begin};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int r = next++; r < end; r = next++) run_one(r);
            });
        for (auto& t : pool) t.join();
    };

    if (!cfg.stop_above) {
        run_range(0, cfg.restarts);
    } else {
        for (int begin = 0; begin < cfg.restarts; begin += kStopBatch) {
            run_range(begin, std::min(cfg.restarts, begin + kStopBatch));
            bool hit = false;
            for (int r = begin; r < std::min(cfg.restarts, begin + kStopBatch); ++r)
                hit = hit || runs[r].value > *cfg.stop_above;
            if (hit) break;
        }
    }

    OptimumResult result;
    int best = -1;
    for (int r = 0; r < cfg.restarts; ++r) {
        if (!done[r]) break;
        result.trace.push_back(runs[r].value);
        if (std::isfinite(runs[r].value) && (best < 0 || runs[r].value > runs[best].value)) best = r;
    }
    if (best < 0) throw ConsistencyError("optimizer found no finite objective value");

    result.best_settings = settings_from_parameters(runs[best].x);
    for (auto& pair : result.best_settings)
        for (auto& d : pair) d = canonical(d);
    result.report = kernel.evaluate(result.best_settings);
    result.best_value = runs[best].value;
    return result;
}

OptimumResult maximize(const LinearNetwork& net, Family family, const OptimizeConfig& cfg) {
    return maximize(CorrelatorKernel(reduce(net), family), cfg);
}

OptimumResult maximize(const NonlinearNetwork& net, Family family, const OptimizeConfig& cfg) {
    return maximize(CorrelatorKernel(reduce(net), family), cfg);
}

std::vector<GridPoint> grid_scan(const NetworkBuilder& builder, const std::vector<std::vector<double>>& grid,
                                 Family family, const OptimizeConfig& cfg) {
    if (grid.empty()) throw InvalidArgument("grid_scan: empty lattice");
    std::vector<GridPoint> out;
    out.reserve(grid.size());
    for (const auto& point : grid) {
        const auto net = builder(point);
        auto result = std::visit([&](const auto& n) { return maximize(n, family, cfg); }, net);
        out.push_back({point, std::move(result)});
    }
    return out;
}

std::vector<std::vector<double>> lattice(const std::vector<std::vector<double>>& axes) {
    if (axes.empty()) throw InvalidArgument("lattice: no axes");
    std::vector<std::vector<double>> points{{}};
    for (const auto& axis : axes) {
        if (axis.empty()) throw InvalidArgument("lattice: empty axis");
        std::vector<std::vector<double>> next;
        for (const auto& p : points)
            for (double v : axis) {
                auto q = p;
                q.push_back(v);
                next.push_back(std::move(q));
            }
        points = std::move(next);
    }
    return points;
}

std::vector<double> arange(double start, double stop, double step) {
    if (!(step > 0.0)) throw InvalidArgument("arange: step must be > 0");
    std::vector<double> out;
    for (int k = 0;; ++k) {
        const double v = start + k * step;
        if (v > stop + 0.5 * step) break;
        out.push_back(std::min(v, stop));
    }
    return out;
}

}  // namespace nlocal
