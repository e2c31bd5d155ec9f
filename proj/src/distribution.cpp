#include "nlocal/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "nlocal/error.hpp"

namespace nlocal {

std::string to_string(Topology t) { return t == Topology::Linear ? "linear" : "nonlinear"; }

DistributionShape DistributionShape::linear(int n) {
    return DistributionShape{Topology::Linear, n, 2, n - 1, 2};
}

DistributionShape DistributionShape::nonlinear(int n) {
    return DistributionShape{Topology::Nonlinear, n, n, n - 1, n};
}

OutcomeDistribution::OutcomeDistribution(DistributionShape shape, std::vector<double> probabilities)
    : shape_(shape), p_(std::move(probabilities)) {
    if (p_.size() != shape_.size()) {
        throw InvalidArgument("outcome table has " + std::to_string(p_.size()) + " cells, expected " +
                              std::to_string(shape_.size()));
    }
    for (double& v : p_) {
        if (!(v >= -1e-12 && v <= 1.0 + 1e-12)) {
            throw ConsistencyError("probability " + std::to_string(v) + " outside [0, 1]");
        }
        v = std::clamp(v, 0.0, 1.0);
    }
    if (normalization_defect() > 1e-9) {
        throw ConsistencyError("outcome table is not normalized (defect " + std::to_string(normalization_defect()) + ")");
    }
}

double OutcomeDistribution::normalization_defect() const {
    double worst = 0.0;
    for (std::size_t x = 0; x < shape_.input_count(); ++x) {
        const auto b = block(x);
        double total = 0.0;
        for (double v : b) total += v;
        worst = std::max(worst, std::abs(total - 1.0));
    }
    return worst;
}

NoSignalingReport check_no_signaling(const OutcomeDistribution& d, double tol) {
    const auto& s = d.shape();
    const int e = s.extremes;
    const std::size_t combos = s.label_combo_count();
    NoSignalingReport report;
    std::vector<double> reference;
    std::vector<double> current;

    // Subset S of parties retaining their outputs, as a bit mask over the
    // packed extreme index (party 1 = most significant bit).
    const std::size_t full = (std::size_t{1} << e) - 1;
    for (std::size_t keep = 0; keep < full; ++keep) {
        const std::size_t out_inputs = full & ~keep;  // parties whose input must not matter
        // Marginal indexed by (a restricted to S) x b, for each x.
        for (std::size_t x_keep = 0; x_keep <= full; ++x_keep) {
            if ((x_keep & out_inputs) != 0) continue;
            bool first = true;
            // Enumerate the other parties' inputs.
            for (std::size_t x_other = out_inputs;; x_other = (x_other - 1) & out_inputs) {
                const std::size_t x = x_keep | x_other;
                current.assign((full + 1) * combos, 0.0);
                const auto blk = d.block(x);
                for (std::size_t a = 0; a <= full; ++a) {
                    const std::size_t a_kept = a & keep;
                    const double* row = blk.data() + a * combos;
                    double* dst = current.data() + a_kept * combos;
                    for (std::size_t b = 0; b < combos; ++b) dst[b] += row[b];
                }
                if (first) {
                    reference = current;
                    first = false;
                } else {
                    for (std::size_t k = 0; k < current.size(); ++k) {
                        report.max_deviation = std::max(report.max_deviation, std::abs(current[k] - reference[k]));
                    }
                }
                if (x_other == 0) break;
            }
        }
    }
    report.ok = report.max_deviation < tol;
    return report;
}

OutcomeDistribution mix(const OutcomeDistribution& a, const OutcomeDistribution& b, double w) {
    if (!(a.shape() == b.shape())) throw InvalidArgument("mix: tables have different shapes");
    if (!(w >= 0.0 && w <= 1.0)) throw InvalidArgument("mix: weight must lie in [0, 1]");
    std::vector<double> p(a.data().size());
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = w * a.data()[k] + (1.0 - w) * b.data()[k];
    return OutcomeDistribution(a.shape(), std::move(p));
}

namespace {

std::string bits(std::size_t value, int width) {
    std::string s(width, '0');
    for (int k = 0; k < width; ++k) {
        if ((value >> (width - 1 - k)) & 1u) s[k] = '1';
    }
    return s;
}

}  // namespace

void write_csv(std::ostream& os, const OutcomeDistribution& d, bool skip_zero) {
    const auto& s = d.shape();
    for (int i = 1; i <= s.extremes; ++i) os << 'x' << i << ',';
    for (int i = 1; i <= s.extremes; ++i) os << 'a' << i << ',';
    for (int j = 1; j <= s.intermediates; ++j) os << 'b' << j << ',';
    os << "probability\n";
    os.precision(17);
    for (std::size_t x = 0; x < s.input_count(); ++x) {
        for (std::size_t a = 0; a < s.output_count(); ++a) {
            for (std::size_t b = 0; b < s.label_combo_count(); ++b) {
                const double p = d(x, a, b);
                if (skip_zero && p == 0.0) continue;
                for (int i = 0; i < s.extremes; ++i) os << ((x >> (s.extremes - 1 - i)) & 1u) << ',';
                for (int i = 0; i < s.extremes; ++i) os << ((a >> (s.extremes - 1 - i)) & 1u) << ',';
                for (int j = 0; j < s.intermediates; ++j) os << bits(d.label_of(b, j), s.label_bits) << ',';
                os << p << '\n';
            }
        }
    }
}

nlohmann::json to_json(const OutcomeDistribution& d) {
    const auto& s = d.shape();
    nlohmann::json j;
    j["topology"] = to_string(s.topology);
    j["n"] = s.n;
    j["extremes"] = s.extremes;
    j["intermediates"] = s.intermediates;
    j["label_bits"] = s.label_bits;
    j["probabilities"] = std::vector<double>(d.data().begin(), d.data().end());
    return j;
}

}  // namespace nlocal
