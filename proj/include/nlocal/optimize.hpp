#pragma once

// Multi-start bounded simplex search over extreme-party measurement
// directions.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "json.hpp"
#include "nlocal/inequalities.hpp"
#include "nlocal/network.hpp"

namespace nlocal {

struct OptimizeConfig {
    int restarts = 32;
    int max_iters = 400;
    double tolerance = 1e-6;
    std::uint64_t seed = 1;
    int threads = 1;
    // Stop launching restarts once a value above this is found.
    std::optional<double> stop_above;

    void validate() const;
};

struct OptimumResult {
    double best_value = 0.0;
    ExtremeSettings best_settings;
    std::vector<double> trace;  // best value per restart, by restart index
    InequalityReport report;    // re-evaluation at best_settings
};

nlohmann::json to_json(const OptimumResult& r);

// Plain Nelder-Mead maximization on R^d. Converges when the simplex's
// value spread drops below `tolerance`; the simplex is rebuilt around the
// incumbent once after convergence, which is the usual guard against a
// collapsed simplex.
struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
};

SimplexResult nelder_mead_maximize(const std::function<double(std::span<const double>)>& objective,
                                   std::vector<double> start, double step, int max_iters, double tolerance);

// Parameters are (theta, phi) for direction 0 then 1 of each extreme party.
ExtremeSettings settings_from_parameters(std::span<const double> params);
std::vector<double> parameters_from_settings(const ExtremeSettings& settings);

// theta folded into [0, pi] (flipping phi by pi), phi wrapped to [0, 2 pi).
Direction canonical(Direction d);

// The two canonical starts: every direction along z, and the z-x plane
// pair at +-pi/4.
ExtremeSettings all_z_settings(int extremes);
ExtremeSettings zx_settings(int extremes);

OptimumResult maximize(const CorrelatorKernel& kernel, const OptimizeConfig& cfg);
OptimumResult maximize(const LinearNetwork& net, Family family, const OptimizeConfig& cfg);
OptimumResult maximize(const NonlinearNetwork& net, Family family, const OptimizeConfig& cfg);

using AnyNetwork = std::variant<LinearNetwork, NonlinearNetwork>;
using NetworkBuilder = std::function<AnyNetwork(std::span<const double>)>;

struct GridPoint {
    std::vector<double> params;
    OptimumResult result;
};

// Maximizes at every lattice point.
std::vector<GridPoint> grid_scan(const NetworkBuilder& builder, const std::vector<std::vector<double>>& grid,
                                 Family family, const OptimizeConfig& cfg);

// Cartesian lattice from per-axis value lists.
std::vector<std::vector<double>> lattice(const std::vector<std::vector<double>>& axes);

// start, start+step, ... up to stop (inclusive within half a step).
std::vector<double> arange(double start, double stop, double step);

}  // namespace nlocal
