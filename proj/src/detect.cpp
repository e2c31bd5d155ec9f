#include "nlocal/detect.hpp"

#include <algorithm>
#include <set>

#include "nlocal/error.hpp"

namespace nlocal {

std::string Phase::id() const {
    return "t" + std::to_string(i) + std::to_string(j) + std::to_string(k);
}

std::vector<Phase> phases() {
    std::vector<Phase> out;
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j)
            for (int k = 1; k <= 3; ++k) out.push_back({i, j, k});
    return out;
}

std::vector<Cut> possible_cuts(int extreme_qubit) {
    switch (extreme_qubit) {
        case 1: return {Cut::k12_3, Cut::k13_2};
        case 2: return {Cut::k12_3, Cut::k23_1};
        case 3: return {Cut::k13_2, Cut::k23_1};
        default: throw InvalidArgument("extreme qubit index must be 1, 2 or 3");
    }
}

std::string to_string(StateNature n) {
    switch (n) {
        case StateNature::Genuine: return "genuine";
        case StateNature::GenuineOther: return "genuine-other";
        case StateNature::Biseparable: return "biseparable";
        case StateNature::Unknown: return "unknown";
    }
    return "unknown";
}

std::string StateConclusion::describe() const {
    switch (nature) {
        case StateNature::Genuine: return "genuinely entangled";
        case StateNature::GenuineOther: return "genuinely entangled, neither GGHZ nor W";
        case StateNature::Biseparable: return "biseparable entangled in the " + to_string(*cut) + " cut";
        case StateNature::Unknown: return "no conclusion";
    }
    return "no conclusion";
}

std::vector<std::vector<std::vector<int>>> phase_routings(const Phase& p) {
    const auto arrangement = p.arrangement();
    std::vector<std::vector<int>> ascending(3);
    for (int s = 0; s < 3; ++s)
        for (int q = 1; q <= 3; ++q)
            if (q != arrangement[s]) ascending[s].push_back(q);

    std::vector<std::vector<std::vector<int>>> out;
    for (int swaps = 0; swaps < 4; ++swaps) {
        auto r = ascending;
        if (swaps & 2) std::swap(r[1][0], r[1][1]);
        if (swaps & 1) std::swap(r[2][0], r[2][1]);
        out.push_back(r);
    }
    return out;
}

PhaseResult run_phase(const std::array<ComplexVector, 3>& states, const Phase& p, const OptimizeConfig& cfg,
                      const TripartiteOptions& opts) {
    auto phase_cfg = cfg;
    phase_cfg.stop_above = kViolationThreshold;

    auto routings = phase_routings(p);
    if (!opts.routing_search) routings.resize(1);

    PhaseResult result;
    result.phase = p;
    bool first = true;
    for (const auto& routing : routings) {
        const auto net = build_nonlinear({states[0], states[1], states[2]}, p.arrangement(), routing);
        const auto opt = maximize(net, Family::Trilocal, phase_cfg);
        if (first || opt.best_value > result.max_lhs) {
            result.max_lhs = opt.best_value;
            result.routing = routing;
            first = false;
        }
        if (result.max_lhs > kViolationThreshold) break;
    }
    result.violated = result.max_lhs > kViolationThreshold;
    return result;
}

namespace {

std::string row_for(int count) {
    switch (count) {
        case 0: return "0";
        case 8: return "8";
        case 12: return "12";
        case 18: return "18";
        case 27: return "27";
        default: break;
    }
    if (count >= 19 && count <= 26) return "19-26";
    return "unlisted";
}

std::string conclusion_for(const std::string& row) {
    if (row == "8") return "All three states are biseparable entangled";
    if (row == "12") return "Two states are biseparable entangled; one is genuinely entangled (neither GGHZ nor W)";
    if (row == "18") return "One state is biseparable entangled; two are genuinely entangled (neither GGHZ nor W)";
    if (row == "19-26") return "All three states are genuinely entangled (neither GGHZ nor W)";
    if (row == "27") return "All three states are genuinely entangled";
    return "No definite conclusion";
}

}  // namespace

DetectionVerdict conclude(std::vector<PhaseResult> results) {
    if (results.size() != 27) throw InvalidArgument("a verdict needs all 27 phases");
    DetectionVerdict v;
    v.phases = std::move(results);

    std::array<std::set<int>, 3> seen;
    std::set<std::array<int, 3>> violated;
    for (const auto& r : v.phases) {
        if (!r.violated) continue;
        ++v.count;
        violated.insert({r.phase.i, r.phase.j, r.phase.k});
        seen[0].insert(r.phase.i);
        seen[1].insert(r.phase.j);
        seen[2].insert(r.phase.k);
    }
    v.table_row = row_for(v.count);
    v.conclusion = conclusion_for(v.table_row);
    if (v.table_row == "unlisted")
        v.diagnostic = "violation count " + std::to_string(v.count) + " matches no listed pattern";

    if (v.table_row == "27") {
        for (auto& s : v.states) s.nature = StateNature::Genuine;
    } else if (v.table_row == "19-26") {
        for (auto& s : v.states) s.nature = StateNature::GenuineOther;
    } else if (v.table_row == "8" || v.table_row == "12" || v.table_row == "18") {
        // Per-state inference needs the violated set to be a product of
        // per-state index sets.
        const std::size_t product = seen[0].size() * seen[1].size() * seen[2].size();
        if (product != violated.size()) {
            v.diagnostic = "violated phases do not factor into per-state qubit sets";
            return v;
        }
        for (int s = 0; s < 3; ++s) {
            if (seen[s].size() == 3) {
                v.states[s].nature = StateNature::GenuineOther;
                continue;
            }
            std::vector<Cut> common{Cut::k12_3, Cut::k13_2, Cut::k23_1};
            for (int q : seen[s]) {
                const auto allowed = possible_cuts(q);
                std::erase_if(common, [&](Cut c) { return std::find(allowed.begin(), allowed.end(), c) == allowed.end(); });
            }
            if (common.size() == 1) {
                v.states[s].nature = StateNature::Biseparable;
                v.states[s].cut = common.front();
            }
        }
    }
    return v;
}

DetectionVerdict run_tripartite(const std::array<ComplexVector, 3>& states, const OptimizeConfig& cfg,
                                const TripartiteOptions& opts) {
    for (const auto& s : states) {
        if (s.size() != 8) throw InvalidArgument("tripartite detection takes three-qubit kets");
        if (!is_normalized(s)) throw InvalidArgument("tripartite detection takes normalized pure states");
    }
    std::vector<PhaseResult> results;
    for (const auto& p : phases()) results.push_back(run_phase(states, p, cfg, opts));
    return conclude(std::move(results));
}

BipartiteVerdict run_bipartite(const std::vector<SourceState>& states, const OptimizeConfig& cfg, bool identical) {
    if (states.size() < 2 || states.size() > 5) throw InvalidArgument("bipartite detection takes 2 to 5 sources");
    for (const auto& s : states)
        if (s.qubits() != 2) throw InvalidArgument("bipartite detection takes two-qubit states");
    BipartiteVerdict v;
    v.optimum = maximize(build_linear(states), Family::Linear, cfg);
    v.value = v.optimum.best_value;
    v.violated = v.value > kViolationThreshold;
    if (!v.violated) {
        v.conclusion = "inconclusive";
    } else if (identical) {
        v.conclusion = "the state is entangled";
        v.caveat = "relies on every source emitting the same state";
    } else {
        v.conclusion = "at least one entangled";
    }
    return v;
}

nlohmann::json to_json(const DetectionVerdict& v) {
    nlohmann::json j;
    auto rows = nlohmann::json::array();
    for (const auto& r : v.phases)
        rows.push_back({{"phase", r.phase.id()}, {"max_lhs", r.max_lhs}, {"violated", r.violated}, {"routing", r.routing}});
    j["phases"] = rows;
    j["count"] = v.count;
    j["table_row"] = v.table_row;
    j["conclusion"] = v.conclusion;
    auto states = nlohmann::json::array();
    for (const auto& s : v.states) {
        nlohmann::json e{{"nature", to_string(s.nature)}, {"description", s.describe()}};
        if (s.cut) e["cut"] = to_string(*s.cut);
        states.push_back(e);
    }
    j["states"] = states;
    if (!v.diagnostic.empty()) j["diagnostic"] = v.diagnostic;
    return j;
}

nlohmann::json to_json(const BipartiteVerdict& v) {
    nlohmann::json j{{"value", v.value}, {"violated", v.violated}, {"conclusion", v.conclusion}};
    if (!v.caveat.empty()) j["caveat"] = v.caveat;
    j["optimum"] = to_json(v.optimum);
    return j;
}

}  // namespace nlocal
