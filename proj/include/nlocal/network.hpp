#pragma once

// Network topologies, qubit-to-party assignment and exact outcome tables.

#include <array>
#include <optional>
#include <variant>
#include <vector>

#include "nlocal/distribution.hpp"
#include "nlocal/linalg.hpp"
#include "nlocal/measurements.hpp"

namespace nlocal {

// A source emits either a pure ket or a density operator.
class SourceState {
  public:
    SourceState(ComplexVector ket);  // NOLINT: implicit by intent
    SourceState(ComplexMatrix rho);  // NOLINT

    bool is_pure() const { return std::holds_alternative<ComplexVector>(state_); }
    int qubits() const;
    const ComplexVector& ket() const { return std::get<ComplexVector>(state_); }
    ComplexMatrix as_density() const;

  private:
    std::variant<ComplexVector, ComplexMatrix> state_;
};

// n two-qubit sources in a chain. Party P_1 holds qubit 1 of source 1,
// P_i (2 <= i <= n) holds qubit 2 of source i-1 and qubit 1 of source i,
// P_{n+1} holds qubit 2 of source n.
struct LinearNetwork {
    std::vector<SourceState> sources;
    // One basis per intermediate party P_2..P_n; defaults to the Bell basis.
    std::vector<LabeledBasis> intermediate_bases;

    int n() const { return static_cast<int>(sources.size()); }
};

// n sources of n qubits each. Source i sends qubit `arrangement[i]`
// (1-based) to extreme party P_i^E and its remaining qubits to the
// intermediate parties: `routing[i][j]` (1-based) is the qubit of source i
// held by P_{j+1}^I.
struct NonlinearNetwork {
    std::vector<ComplexVector> sources;
    std::vector<int> arrangement;
    std::vector<std::vector<int>> routing;
    std::vector<LabeledBasis> intermediate_bases;  // defaults to ghz_basis(n)

    int n() const { return static_cast<int>(sources.size()); }
};

LinearNetwork build_linear(std::vector<SourceState> states);

// Remaining qubits are handed to P_1^I, P_2^I, ... in ascending index
// unless an explicit routing is supplied.
NonlinearNetwork build_nonlinear(std::vector<ComplexVector> states, std::vector<int> arrangement,
                                 std::optional<std::vector<std::vector<int>>> routing = std::nullopt);

// Two measurement directions (input 0 and input 1) per extreme party.
using ExtremeSettings = std::vector<std::array<Direction, 2>>;

// Qubit bookkeeping shared by both topologies. The joint register is the
// tensor product of the sources in order; `party_qubits` lists, for the
// extreme parties followed by the intermediates, the joint-register qubit
// indices each party holds.
struct PartyLayout {
    DistributionShape shape;
    std::vector<std::vector<int>> party_qubits;
    std::vector<LabeledBasis> intermediate_bases;
    int total_qubits = 0;

    // Joint-register qubits in "party order": extremes first, then each
    // intermediate's qubits.
    std::vector<int> party_order() const;
};

PartyLayout layout_of(const LinearNetwork& net);
PartyLayout layout_of(const NonlinearNetwork& net);

// Joint state of all sources after conditioning on every intermediate
// outcome: entry b (combined label index) is the unnormalized extreme-party
// ket (pure networks) or operator (mixed networks).
struct IntermediateReduction {
    DistributionShape shape;
    bool pure = true;
    std::vector<ComplexVector> kets;
    std::vector<ComplexMatrix> operators;

    // The operator for combined label b, formed on demand for pure kets.
    ComplexMatrix operator_for(std::size_t b) const;
};

IntermediateReduction reduce(const LinearNetwork& net);
IntermediateReduction reduce(const NonlinearNetwork& net);

// Born-rule table over all inputs and outcomes, computed source-contracted
// from the reduction.
OutcomeDistribution joint_distribution(const LinearNetwork& net, const ExtremeSettings& settings);
OutcomeDistribution joint_distribution(const NonlinearNetwork& net, const ExtremeSettings& settings);
OutcomeDistribution joint_distribution(const IntermediateReduction& red, const ExtremeSettings& settings);

// Reference path: projects the full joint state onto the product of one
// rank-one projector per party. Slow; intended for cross-checks.
OutcomeDistribution joint_distribution_dense(const LinearNetwork& net, const ExtremeSettings& settings);
OutcomeDistribution joint_distribution_dense(const NonlinearNetwork& net, const ExtremeSettings& settings);

// One cell of the reference path: P(a, b | x).
double dense_probability(const NonlinearNetwork& net, const ExtremeSettings& settings, std::size_t x, std::size_t a,
                         std::size_t b);

// Returns the joint source-ordered ket (all sources pure).
ComplexVector joint_ket(const NonlinearNetwork& net);

}  // namespace nlocal
