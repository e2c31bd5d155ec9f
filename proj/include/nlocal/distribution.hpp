#pragma once

// Outcome tables P(a, b_1..b_K | x) for networks whose extreme parties
// choose one of two binary measurements and whose intermediate parties
// perform a single fixed measurement.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace nlocal {

enum class Topology { Linear, Nonlinear };

std::string to_string(Topology t);

// Shape of an outcome table.
//
// Index packing: the input vector x = (x_1..x_E) and the extreme output
// vector a = (a_1..a_E) are packed with party 1 as the most significant
// bit. Intermediate labels b_1..b_K (each `label_bits` wide) are packed
// into one combined index with b_1 most significant.
struct DistributionShape {
    Topology topology = Topology::Linear;
    int n = 2;               // number of sources
    int extremes = 2;        // E
    int intermediates = 1;   // K
    int label_bits = 2;      // bits per intermediate label

    std::size_t input_count() const { return std::size_t{1} << extremes; }
    std::size_t output_count() const { return std::size_t{1} << extremes; }
    std::size_t label_count() const { return std::size_t{1} << label_bits; }
    std::size_t label_combo_count() const { return std::size_t{1} << (label_bits * intermediates); }
    std::size_t cells_per_input() const { return output_count() * label_combo_count(); }
    std::size_t size() const { return input_count() * cells_per_input(); }

    // Shape of a linear network with n sources, or a non-linear one.
    static DistributionShape linear(int n);
    static DistributionShape nonlinear(int n);

    bool operator==(const DistributionShape&) const = default;
};

class OutcomeDistribution {
  public:
    // Validates entries: values below -1e-12 or above 1 + 1e-12 raise
    // ConsistencyError; values in [-1e-12, 0) clip to 0. Each input's
    // block must sum to 1 within 1e-9.
    OutcomeDistribution(DistributionShape shape, std::vector<double> probabilities);

    const DistributionShape& shape() const { return shape_; }
    Topology topology() const { return shape_.topology; }

    std::size_t index(std::size_t x, std::size_t a, std::size_t b) const {
        return (x * shape_.output_count() + a) * shape_.label_combo_count() + b;
    }
    double operator()(std::size_t x, std::size_t a, std::size_t b) const { return p_[index(x, a, b)]; }

    // All cells for input x, laid out [a][b].
    std::span<const double> block(std::size_t x) const {
        return {p_.data() + x * shape_.cells_per_input(), shape_.cells_per_input()};
    }
    std::span<const double> data() const { return p_; }

    // Intermediate j's label inside a combined label index.
    unsigned label_of(std::size_t combined, int j) const {
        const int shift = shape_.label_bits * (shape_.intermediates - 1 - j);
        return static_cast<unsigned>((combined >> shift) & (shape_.label_count() - 1));
    }

    // Largest deviation of any input block's total from 1.
    double normalization_defect() const;

  private:
    DistributionShape shape_;
    std::vector<double> p_;
};

struct NoSignalingReport {
    bool ok = true;
    double max_deviation = 0.0;
};

// For every subset S of extreme parties, the marginal of (a_S, b) must not
// depend on the inputs of the parties outside S. Tolerance 1e-9.
NoSignalingReport check_no_signaling(const OutcomeDistribution& d, double tol = 1e-9);

// Convex combination w*a + (1-w)*b of two tables of the same shape.
OutcomeDistribution mix(const OutcomeDistribution& a, const OutcomeDistribution& b, double w);

// Columns: x_1..x_E, a_1..a_E, b_1..b_K (bit strings), probability.
void write_csv(std::ostream& os, const OutcomeDistribution& d, bool skip_zero = false);

nlohmann::json to_json(const OutcomeDistribution& d);

}  // namespace nlocal
