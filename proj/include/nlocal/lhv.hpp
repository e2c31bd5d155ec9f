#pragma once

// Classical models with one independent hidden variable per source: the
// randomness of source i is eta_i ~ Lambda_i, and every party answers with
// a deterministic function of its input and of the hidden variables of the
// sources it is connected to. There is no joint table over (eta_1..eta_n),
// so the product form of the hidden-variable distribution holds by
// construction.

#include <array>
#include <cstdint>
#include <vector>

#include "json.hpp"
#include "nlocal/distribution.hpp"

namespace nlocal {

struct ClassicalModel {
    Topology topology = Topology::Linear;
    int n = 2;
    // lambdas[i][eta]: distribution of source i over its alphabet.
    std::vector<std::vector<double>> lambdas;
    // extreme[e][eta][x]: output bit of extreme party e.
    std::vector<std::vector<std::array<int, 2>>> extreme;
    // intermediate[j][k]: label of intermediate party j, where k packs the
    // hidden variables of its sources (first source most significant).
    std::vector<std::vector<unsigned>> intermediate;

    DistributionShape shape() const;
    int alphabet(int source) const { return static_cast<int>(lambdas[source].size()); }

    // Sources seen by each party.
    int extreme_source(int e) const;
    std::vector<int> intermediate_sources(int j) const;

    // Throws InvalidArgument on malformed tables or Lambda_i off the
    // simplex by more than 1e-12.
    void validate() const;
};

// Distributions uniform on the simplex, response tables uniform over the
// outcome alphabet. Linear chains support 2 <= n <= 4, non-linear networks
// n in {3, 4}; alphabet in 1..8.
ClassicalModel sample_model(Topology topology, int n, int alphabet, std::uint64_t seed);

// Every party outputs 0 (intermediates label 0) regardless of input.
ClassicalModel constant_model(Topology topology, int n);

// Exact summation over the hidden alphabets.
OutcomeDistribution model_distribution(const ClassicalModel& m);

// Model realizing w*P_a + (1-w)*P_b. Requires a and b to share every
// Lambda_i and to differ only in parties attached to `source`; the source's
// alphabet is doubled with a flag picking the response set, which stays
// inside the independent-source class.
ClassicalModel mix_on_source(const ClassicalModel& a, const ClassicalModel& b, double w, int source);

// Redraws the responses of every party attached to `source`.
ClassicalModel resample_attached(const ClassicalModel& m, int source, std::uint64_t seed);

struct CertifyReport {
    Topology topology = Topology::Linear;
    int n = 2;
    int alphabet = 4;
    int trials = 0;
    int mixtures = 0;  // trials evaluated on a mixed model
    double max_lhs = 0.0;
    double max_no_signaling_deviation = 0.0;
    double max_normalization_defect = 0.0;
    std::vector<ClassicalModel> failures;
};

// Samples models (every other trial a source mixture) and evaluates the
// full inequality family of the topology on each. A failure is a model
// whose max LHS exceeds 1 + 1e-9.
CertifyReport certify(Topology topology, int n, int trials, std::uint64_t seed, int alphabet = 4);

nlohmann::json to_json(const ClassicalModel& m);
nlohmann::json to_json(const CertifyReport& r);

}  // namespace nlocal
