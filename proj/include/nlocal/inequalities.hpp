#pragma once

// Correlators and the non-linear network inequalities built from them.
//
// Linear chain (n sources):   sqrt|I| + sqrt|J| <= 1.
// Non-linear, n sources:      |I_{f,0}|^{1/n} + |I_{g,1}|^{1/n} <= 1 for
//                             every pair of parity selectors f, g in
//                             {0,1}^{n-1}.
// Any model with independent classical sources satisfies all of them.

#include <span>
#include <string>
#include <vector>

#include "nlocal/distribution.hpp"
#include "nlocal/network.hpp"

namespace nlocal {

enum class Family { Linear, Trilocal, Nlocal };

std::string to_string(Family f);
Family parse_family(const std::string& text);

inline constexpr double kViolationThreshold = 1.0 + 1e-9;

// Three-bit parities of the trilocal correlators:
//   level 0: x + y + z + 1,   level 1: xy + yz + xz   (mod 2).
unsigned trilocal_parity(int level, std::span<const int> bits);

// Elementary symmetric polynomial of degree level+1 in the bits, mod 2.
unsigned symmetric_parity(int level, std::span<const int> bits);

// Three bits use trilocal_parity, any other arity symmetric_parity.
unsigned parity(int level, std::span<const int> bits);

struct LinearCorrelators {
    double I = 0.0;
    double J = 0.0;
};

LinearCorrelators linear_correlators(const OutcomeDistribution& d);
double linear_value(double I, double J);

// Trilocal correlator for selectors (m1, m2) and input-parity weight par.
double trilocal_correlator(const OutcomeDistribution& d, int m1, int m2, int par);

struct InequalityReport {
    Family family = Family::Linear;
    int n = 2;
    // Linear: {I, J}. Non-linear: index selector * 2 + par, where the
    // selector packs (m_1, ..., m_{n-1}) with m_1 most significant.
    std::vector<double> correlators;
    // Linear: one value. Non-linear: index f * 2^{n-1} + g pairing the
    // par=0 correlator of selector f with the par=1 correlator of g.
    std::vector<double> lhs;
    double max_lhs = 0.0;
    std::size_t argmax = 0;
    bool violated = false;

    // "m1m2|n1n2"-style label of an LHS entry.
    std::string lhs_label(std::size_t k) const;
};

nlohmann::json to_json(const InequalityReport& r);

InequalityReport linear_report(const OutcomeDistribution& d);
InequalityReport trilocal_all(const OutcomeDistribution& d);
InequalityReport nlocal_all(const OutcomeDistribution& d, int n);

// Evaluates the family appropriate for `family` on a table.
InequalityReport evaluate(const OutcomeDistribution& d, Family family);

// Five-party correlator computed directly with parity signs and after
// coarse-graining each intermediate label to the single bit s_y(b);
// returns the largest absolute difference over all (y1, y2, x).
double coarse_grained_consistency(const OutcomeDistribution& d);

// Builds a report from raw correlator values.
InequalityReport report_from_correlators(Family family, int n, std::vector<double> correlators);

// Correlators as traces against the extreme parties' averaged
// observables: for selector s, R_s = sum_b sign_s(b) rho_b, and
//   corr(s, par) = Tr[R_s (M_1^par (x) ... (x) M_E^par)],
//   M^0 = (A_0 + A_1)/2, M^1 = (A_0 - A_1)/2.
// Equivalent to building the table and calling `evaluate`, without
// materializing the table.
class CorrelatorKernel {
  public:
    CorrelatorKernel(const IntermediateReduction& red, Family family);

    InequalityReport evaluate(const ExtremeSettings& settings) const;
    double max_lhs(const ExtremeSettings& settings) const;

    Family family() const { return family_; }
    int extremes() const { return shape_.extremes; }

  private:
    std::vector<double> correlators(const ExtremeSettings& settings) const;

    DistributionShape shape_;
    Family family_;
    std::vector<ComplexMatrix> weighted_;  // R_s, one per selector
};

}  // namespace nlocal
