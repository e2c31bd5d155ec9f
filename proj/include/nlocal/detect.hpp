#pragma once

// Entanglement detection from network inequality violations: the
// bipartite protocol on a linear chain and the 27-phase tripartite
// protocol on the non-linear trilocal network.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlocal/optimize.hpp"
#include "nlocal/states.hpp"

namespace nlocal {

// Phase t_{i,j,k}: qubit i of state 1, j of state 2 and k of state 3 go to
// the extreme parties (1-based).
struct Phase {
    int i = 1, j = 1, k = 1;

    std::vector<int> arrangement() const { return {i, j, k}; }
    std::string id() const;
    bool operator==(const Phase&) const = default;
};

// All 27 phases, lexicographic in (i, j, k).
std::vector<Phase> phases();

// Cuts of a biseparable state compatible with a violation when qubit
// `extreme_qubit` (1-based) is the one held by an extreme party: those
// whose entangled pair contains it.
std::vector<Cut> possible_cuts(int extreme_qubit);

enum class StateNature { Genuine, GenuineOther, Biseparable, Unknown };

std::string to_string(StateNature n);

struct StateConclusion {
    StateNature nature = StateNature::Unknown;
    std::optional<Cut> cut;  // set for Biseparable
    std::string describe() const;
};

struct PhaseResult {
    Phase phase;
    double max_lhs = 0.0;  // for violated phases, the first value found above threshold
    bool violated = false;
    std::vector<std::vector<int>> routing;  // intermediate routing that attained max_lhs
};

struct DetectionVerdict {
    std::vector<PhaseResult> phases;
    int count = 0;
    std::array<StateConclusion, 3> states;
    std::string conclusion;
    std::string table_row;   // count row label: "0", "8", "12", "18", "19-26", "27" or "unlisted"
    std::string diagnostic;  // set when the violated set has no product structure or an unlisted count
};

struct TripartiteOptions {
    // Try both orders of each state's remaining qubits at the intermediate
    // parties and keep the best; false uses the ascending default only.
    bool routing_search = true;
};

// Distinct routings examined per phase: the order state 1's qubits take is
// fixed, states 2 and 3 may swap (exchanging the two intermediates maps
// the inequality set onto itself).
std::vector<std::vector<std::vector<int>>> phase_routings(const Phase& p);

PhaseResult run_phase(const std::array<ComplexVector, 3>& states, const Phase& p, const OptimizeConfig& cfg,
                      const TripartiteOptions& opts = {});

// Verdict from the per-phase flags alone; the states are never inspected.
DetectionVerdict conclude(std::vector<PhaseResult> results);

DetectionVerdict run_tripartite(const std::array<ComplexVector, 3>& states, const OptimizeConfig& cfg,
                                const TripartiteOptions& opts = {});

struct BipartiteVerdict {
    double value = 0.0;
    bool violated = false;
    std::string conclusion;
    std::string caveat;
    OptimumResult optimum;
};

// Maximizes the linear-chain inequality over the extreme directions.
// `identical` declares every source to emit the same state, which lets a
// violation certify that state; this relies on trusting the sources.
BipartiteVerdict run_bipartite(const std::vector<SourceState>& states, const OptimizeConfig& cfg,
                               bool identical = false);

nlohmann::json to_json(const DetectionVerdict& v);
nlohmann::json to_json(const BipartiteVerdict& v);

}  // namespace nlocal
