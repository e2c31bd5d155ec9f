#include "nlocal/inequalities.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "nlocal/error.hpp"

namespace nlocal {

std::string to_string(Family f) {
    switch (f) {
        case Family::Linear: return "linear";
        case Family::Trilocal: return "trilocal";
        case Family::Nlocal: return "nlocal";
    }
    return "?";
}

Family parse_family(const std::string& text) {
    if (text == "linear") return Family::Linear;
    if (text == "trilocal") return Family::Trilocal;
    if (text == "nlocal") return Family::Nlocal;
    throw InvalidArgument("unknown inequality family '" + text + "'");
}

unsigned trilocal_parity(int level, std::span<const int> bits) {
    if (bits.size() != 3) throw InvalidArgument("trilocal parity takes three bits");
    const int x = bits[0], y = bits[1], z = bits[2];
    switch (level) {
        case 0: return static_cast<unsigned>((x + y + z + 1) & 1);
        case 1: return static_cast<unsigned>((x * y + y * z + x * z) & 1);
        default: throw InvalidArgument("trilocal parity level must be 0 or 1");
    }
}

unsigned symmetric_parity(int level, std::span<const int> bits) {
    const int arity = static_cast<int>(bits.size());
    if (level < 0 || level > arity - 1) throw InvalidArgument("parity level out of range");
    // e_k(bits) counts the k-subsets of set bits: C(popcount, k).
    const int ones = static_cast<int>(std::count(bits.begin(), bits.end(), 1));
    const int k = level + 1;
    if (k > ones) return 0u;
    // C(ones, k) mod 2 via Lucas: odd iff k's bits are a subset of ones'.
    return (static_cast<unsigned>(k) & ~static_cast<unsigned>(ones)) == 0 ? 1u : 0u;
}

unsigned parity(int level, std::span<const int> bits) {
    if (bits.size() == 3) return trilocal_parity(level, bits);
    return symmetric_parity(level, bits);
}

namespace {

std::vector<int> label_bits(unsigned label, int width) {
    std::vector<int> bits(width);
    for (int k = 0; k < width; ++k) bits[k] = static_cast<int>((label >> (width - 1 - k)) & 1u);
    return bits;
}

void require_topology(const DistributionShape& shape, Family family) {
    const bool linear = shape.topology == Topology::Linear;
    if (linear != (family == Family::Linear)) {
        throw InvalidArgument(to_string(family) + " inequalities do not apply to a " + to_string(shape.topology) +
                              " distribution");
    }
    if (family == Family::Trilocal && shape.n != 3) throw InvalidArgument("trilocal inequalities need three sources");
}

// sign[level][label] = +-1 for one intermediate party.
std::array<std::vector<double>, 2> level_signs(const DistributionShape& shape, Family family) {
    std::array<std::vector<double>, 2> signs;
    const unsigned count = static_cast<unsigned>(shape.label_count());
    for (int level = 0; level < 2; ++level) {
        signs[level].resize(count);
        for (unsigned label = 0; label < count; ++label) {
            const auto bits = label_bits(label, shape.label_bits);
            unsigned s = 0;
            switch (family) {
                case Family::Linear: s = static_cast<unsigned>(bits[level]); break;
                case Family::Trilocal: s = trilocal_parity(level, bits); break;
                case Family::Nlocal: s = symmetric_parity(level, bits); break;
            }
            signs[level][label] = s ? -1.0 : 1.0;
        }
    }
    return signs;
}

// sign_s(b) for every selector s in {0,1}^K (s_1 most significant) and
// combined label b.
std::vector<std::vector<double>> selector_signs(const DistributionShape& shape, Family family) {
    const auto signs = level_signs(shape, family);
    const int k = shape.intermediates;
    const std::size_t selectors = std::size_t{1} << k;
    std::vector<std::vector<double>> out(selectors, std::vector<double>(shape.label_combo_count()));
    for (std::size_t s = 0; s < selectors; ++s) {
        for (std::size_t b = 0; b < shape.label_combo_count(); ++b) {
            double v = 1.0;
            for (int j = 0; j < k; ++j) {
                const int level = static_cast<int>((s >> (k - 1 - j)) & 1u);
                const int shift = shape.label_bits * (k - 1 - j);
                v *= signs[level][(b >> shift) & (shape.label_count() - 1)];
            }
            out[s][b] = v;
        }
    }
    return out;
}

// For every input x and selector s:
//   sum_{a,b} (-1)^{|a|} sign_s(b) P(a, b | x).
// The selector sign factorizes over intermediates, so each row is reduced
// one intermediate at a time.
std::vector<std::vector<double>> selector_sums(const OutcomeDistribution& d, Family family) {
    const auto& shape = d.shape();
    const auto signs = level_signs(shape, family);
    const int k = shape.intermediates;
    const std::size_t l = shape.label_count();
    const std::size_t combos = shape.label_combo_count();
    const std::size_t selectors = std::size_t{1} << k;
    std::vector<std::vector<double>> sums(shape.input_count(), std::vector<double>(selectors, 0.0));

    std::vector<double> row(combos);
    std::vector<double> buf_a, buf_b;
    for (std::size_t x = 0; x < shape.input_count(); ++x) {
        // Fold the extreme-output sign first: row[b] = sum_a (-1)^{|a|} P.
        std::fill(row.begin(), row.end(), 0.0);
        for (std::size_t a = 0; a < shape.output_count(); ++a) {
            const double sa = (std::popcount(a) & 1) ? -1.0 : 1.0;
            const double* src = d.block(x).data() + a * combos;
            for (std::size_t b = 0; b < combos; ++b) row[b] += sa * src[b];
        }
        // buf layout: [remaining label prefix][selector bits so far]. Each
        // step contracts the last remaining intermediate and prepends its
        // selector bit, so the final index has level_1 most significant.
        buf_a = row;
        std::size_t prefix = combos;
        std::size_t done = 1;
        for (int j = k - 1; j >= 0; --j) {
            prefix /= l;
            buf_b.assign(prefix * done * 2, 0.0);
            for (std::size_t p = 0; p < prefix; ++p) {
                for (std::size_t lab = 0; lab < l; ++lab) {
                    const double* src = buf_a.data() + (p * l + lab) * done;
                    for (int level = 0; level < 2; ++level) {
                        const double sgn = signs[level][lab];
                        double* dst = buf_b.data() + (p * 2 + level) * done;
                        for (std::size_t t = 0; t < done; ++t) dst[t] += sgn * src[t];
                    }
                }
            }
            done *= 2;
            buf_a.swap(buf_b);
        }
        for (std::size_t s = 0; s < selectors; ++s) sums[x][s] = buf_a[s];
    }
    return sums;
}

std::vector<double> correlators_from_sums(const DistributionShape& shape, Family family,
                                          const std::vector<std::vector<double>>& sums) {
    const double norm = 1.0 / static_cast<double>(shape.input_count());
    if (family == Family::Linear) {
        const std::size_t all_ones = (std::size_t{1} << shape.intermediates) - 1;
        double I = 0.0, J = 0.0;
        for (std::size_t x = 0; x < shape.input_count(); ++x) {
            I += sums[x][0];
            J += ((std::popcount(x) & 1) ? -1.0 : 1.0) * sums[x][all_ones];
        }
        return {I * norm, J * norm};
    }
    const std::size_t selectors = sums.front().size();
    std::vector<double> corr(selectors * 2, 0.0);
    for (std::size_t s = 0; s < selectors; ++s) {
        for (std::size_t x = 0; x < shape.input_count(); ++x) {
            corr[s * 2 + 0] += sums[x][s];
            corr[s * 2 + 1] += ((std::popcount(x) & 1) ? -1.0 : 1.0) * sums[x][s];
        }
        corr[s * 2 + 0] *= norm;
        corr[s * 2 + 1] *= norm;
    }
    return corr;
}

}  // namespace

std::string InequalityReport::lhs_label(std::size_t k) const {
    if (family == Family::Linear) return "IJ";
    const int bits = n - 1;
    const std::size_t selectors = std::size_t{1} << bits;
    const std::size_t f = k / selectors, g = k % selectors;
    std::string s;
    for (int j = 0; j < bits; ++j) s += ((f >> (bits - 1 - j)) & 1u) ? '1' : '0';
    s += '|';
    for (int j = 0; j < bits; ++j) s += ((g >> (bits - 1 - j)) & 1u) ? '1' : '0';
    return s;
}

nlohmann::json to_json(const InequalityReport& r) {
    nlohmann::json j;
    j["family"] = to_string(r.family);
    j["n"] = r.n;
    j["correlators"] = r.correlators;
    j["lhs"] = r.lhs;
    j["max_lhs"] = r.max_lhs;
    j["argmax"] = r.argmax;
    j["argmax_label"] = r.lhs_label(r.argmax);
    j["violated"] = r.violated;
    return j;
}

InequalityReport report_from_correlators(Family family, int n, std::vector<double> correlators) {
    InequalityReport r;
    r.family = family;
    r.n = n;
    r.correlators = std::move(correlators);
    if (family == Family::Linear) {
        r.lhs = {linear_value(r.correlators[0], r.correlators[1])};
    } else {
        const std::size_t selectors = r.correlators.size() / 2;
        const double root = 1.0 / n;
        std::vector<double> c0(selectors), c1(selectors);
        for (std::size_t s = 0; s < selectors; ++s) {
            c0[s] = std::pow(std::abs(r.correlators[s * 2]), root);
            c1[s] = std::pow(std::abs(r.correlators[s * 2 + 1]), root);
        }
        r.lhs.resize(selectors * selectors);
        for (std::size_t f = 0; f < selectors; ++f) {
            for (std::size_t g = 0; g < selectors; ++g) r.lhs[f * selectors + g] = c0[f] + c1[g];
        }
    }
    const auto it = std::max_element(r.lhs.begin(), r.lhs.end());
    r.max_lhs = *it;
    r.argmax = static_cast<std::size_t>(it - r.lhs.begin());
    r.violated = r.max_lhs > kViolationThreshold;
    return r;
}

LinearCorrelators linear_correlators(const OutcomeDistribution& d) {
    require_topology(d.shape(), Family::Linear);
    const auto c = correlators_from_sums(d.shape(), Family::Linear, selector_sums(d, Family::Linear));
    return {c[0], c[1]};
}

double linear_value(double I, double J) { return std::sqrt(std::abs(I)) + std::sqrt(std::abs(J)); }

double trilocal_correlator(const OutcomeDistribution& d, int m1, int m2, int par) {
    require_topology(d.shape(), Family::Trilocal);
    if ((m1 | m2 | par) & ~1) throw InvalidArgument("trilocal selectors are single bits");
    const auto c = correlators_from_sums(d.shape(), Family::Trilocal, selector_sums(d, Family::Trilocal));
    return c[static_cast<std::size_t>(m1 * 2 + m2) * 2 + static_cast<std::size_t>(par)];
}

InequalityReport linear_report(const OutcomeDistribution& d) { return evaluate(d, Family::Linear); }
InequalityReport trilocal_all(const OutcomeDistribution& d) { return evaluate(d, Family::Trilocal); }

InequalityReport nlocal_all(const OutcomeDistribution& d, int n) {
    if (d.shape().n != n) throw InvalidArgument("distribution has " + std::to_string(d.shape().n) + " sources, not " + std::to_string(n));
    return evaluate(d, Family::Nlocal);
}

InequalityReport evaluate(const OutcomeDistribution& d, Family family) {
    require_topology(d.shape(), family);
    return report_from_correlators(family, d.shape().n,
                                   correlators_from_sums(d.shape(), family, selector_sums(d, family)));
}

double coarse_grained_consistency(const OutcomeDistribution& d) {
    const auto& shape = d.shape();
    require_topology(shape, Family::Trilocal);
    const std::size_t combos = shape.label_combo_count();
    std::array<std::vector<unsigned>, 2> s;  // s[level][label]
    for (int level = 0; level < 2; ++level) {
        for (unsigned label = 0; label < shape.label_count(); ++label) {
            s[level].push_back(trilocal_parity(level, label_bits(label, shape.label_bits)));
        }
    }
    double worst = 0.0;
    for (int y1 = 0; y1 < 2; ++y1) {
        for (int y2 = 0; y2 < 2; ++y2) {
            for (std::size_t x = 0; x < shape.input_count(); ++x) {
                // (i) parity-signed sum over the full table.
                double direct = 0.0;
                // (ii) binary table P(a, c1, c2 | x) with c_i = s_{y_i}(b_i).
                std::vector<double> coarse(shape.output_count() * 4, 0.0);
                for (std::size_t a = 0; a < shape.output_count(); ++a) {
                    const int pa = std::popcount(a) & 1;
                    for (std::size_t b = 0; b < combos; ++b) {
                        const double p = d(x, a, b);
                        const unsigned c1 = s[y1][d.label_of(b, 0)];
                        const unsigned c2 = s[y2][d.label_of(b, 1)];
                        direct += ((pa + c1 + c2) & 1u) ? -p : p;
                        coarse[a * 4 + c1 * 2 + c2] += p;
                    }
                }
                double binary = 0.0;
                for (std::size_t a = 0; a < shape.output_count(); ++a) {
                    for (unsigned c = 0; c < 4; ++c) {
                        const unsigned sign = static_cast<unsigned>(std::popcount(a)) + (c >> 1) + (c & 1u);
                        binary += (sign & 1u) ? -coarse[a * 4 + c] : coarse[a * 4 + c];
                    }
                }
                worst = std::max(worst, std::abs(direct - binary));
            }
        }
    }
    return worst;
}

CorrelatorKernel::CorrelatorKernel(const IntermediateReduction& red, Family family)
    : shape_(red.shape), family_(family) {
    require_topology(shape_, family);
    const auto signs = selector_signs(shape_, family);
    std::vector<std::size_t> used;
    if (family == Family::Linear) {
        used = {0, signs.size() - 1};
    } else {
        for (std::size_t s = 0; s < signs.size(); ++s) used.push_back(s);
    }
    const Eigen::Index dim = Eigen::Index{1} << shape_.extremes;
    for (std::size_t s : used) {
        ComplexMatrix r = ComplexMatrix::Zero(dim, dim);
        for (std::size_t b = 0; b < shape_.label_combo_count(); ++b) {
            if (red.pure) {
                r.noalias() += signs[s][b] * (red.kets[b] * red.kets[b].adjoint());
            } else {
                r += signs[s][b] * red.operators[b];
            }
        }
        weighted_.push_back(std::move(r));
    }
}

std::vector<double> CorrelatorKernel::correlators(const ExtremeSettings& settings) const {
    if (static_cast<int>(settings.size()) != shape_.extremes) throw InvalidArgument("settings do not match the network");
    std::array<ComplexMatrix, 2> averaged;
    for (int par = 0; par < 2; ++par) {
        ComplexMatrix k = ComplexMatrix::Ones(1, 1);
        for (const auto& party : settings) {
            const Matrix2c a0 = party[0].observable();
            const Matrix2c a1 = party[1].observable();
            const Matrix2c m = par == 0 ? Matrix2c((a0 + a1) / 2.0) : Matrix2c((a0 - a1) / 2.0);
            k = tensor_product(k, ComplexMatrix(m));
        }
        averaged[par] = std::move(k);
    }
    auto trace = [](const ComplexMatrix& r, const ComplexMatrix& k) {
        return (r.array() * k.transpose().array()).sum().real();
    };
    if (family_ == Family::Linear) return {trace(weighted_[0], averaged[0]), trace(weighted_[1], averaged[1])};
    std::vector<double> corr(weighted_.size() * 2);
    for (std::size_t s = 0; s < weighted_.size(); ++s) {
        corr[s * 2] = trace(weighted_[s], averaged[0]);
        corr[s * 2 + 1] = trace(weighted_[s], averaged[1]);
    }
    return corr;
}

InequalityReport CorrelatorKernel::evaluate(const ExtremeSettings& settings) const {
    return report_from_correlators(family_, shape_.n, correlators(settings));
}

double CorrelatorKernel::max_lhs(const ExtremeSettings& settings) const {
    const auto corr = correlators(settings);
    if (family_ == Family::Linear) return linear_value(corr[0], corr[1]);
    const double root = 1.0 / shape_.n;
    double best0 = 0.0, best1 = 0.0;
    for (std::size_t s = 0; s < corr.size() / 2; ++s) {
        best0 = std::max(best0, std::abs(corr[s * 2]));
        best1 = std::max(best1, std::abs(corr[s * 2 + 1]));
    }
    // Both terms are monotone in |corr|, so the best pair takes each maximum.
    return std::pow(best0, root) + std::pow(best1, root);
}

}  // namespace nlocal
