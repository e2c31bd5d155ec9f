#include "nlocal/network.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "nlocal/error.hpp"

namespace nlocal {

SourceState::SourceState(ComplexVector ket) : state_(std::move(ket)) {
    if (!is_normalized(std::get<ComplexVector>(state_))) throw InvalidArgument("source ket is not normalized");
}

SourceState::SourceState(ComplexMatrix rho) : state_(std::move(rho)) {
    if (!is_density_matrix(std::get<ComplexMatrix>(state_))) throw InvalidArgument("source operator is not a density matrix");
}

int SourceState::qubits() const {
    return is_pure() ? qubit_count(ket().size()) : qubit_count(std::get<ComplexMatrix>(state_).rows());
}

ComplexMatrix SourceState::as_density() const {
    return is_pure() ? density(ket()) : std::get<ComplexMatrix>(state_);
}

LinearNetwork build_linear(std::vector<SourceState> states) {
    const int n = static_cast<int>(states.size());
    if (n < 2 || n > 5) throw InvalidArgument("linear network needs between 2 and 5 sources");
    for (int i = 0; i < n; ++i) {
        if (states[i].qubits() != 2) {
            throw InvalidArgument("linear network source " + std::to_string(i + 1) + " is not a two-qubit state");
        }
    }
    LinearNetwork net;
    net.sources = std::move(states);
    net.intermediate_bases.assign(n - 1, bell_basis());
    return net;
}

NonlinearNetwork build_nonlinear(std::vector<ComplexVector> states, std::vector<int> arrangement,
                                 std::optional<std::vector<std::vector<int>>> routing) {
    const int n = static_cast<int>(states.size());
    if (n < 3 || n > 4) throw InvalidArgument("non-linear network needs 3 or 4 sources");
    if (static_cast<int>(arrangement.size()) != n) throw InvalidArgument("arrangement needs one index per source");
    for (int i = 0; i < n; ++i) {
        if (states[i].size() != (Eigen::Index{1} << n)) {
            throw InvalidArgument("non-linear source " + std::to_string(i + 1) + " must be a " + std::to_string(n) +
                                  "-qubit ket");
        }
        if (!is_normalized(states[i])) throw InvalidArgument("non-linear source " + std::to_string(i + 1) + " is not normalized");
        if (arrangement[i] < 1 || arrangement[i] > n) throw InvalidArgument("arrangement index out of range");
    }
    NonlinearNetwork net;
    net.sources = std::move(states);
    net.arrangement = std::move(arrangement);
    if (routing) {
        if (static_cast<int>(routing->size()) != n) throw InvalidArgument("routing needs one entry per source");
        for (int i = 0; i < n; ++i) {
            auto seen = (*routing)[i];
            seen.push_back(net.arrangement[i]);
            std::sort(seen.begin(), seen.end());
            std::vector<int> expected(n);
            std::iota(expected.begin(), expected.end(), 1);
            if (seen != expected) throw InvalidArgument("routing of source " + std::to_string(i + 1) + " is not a permutation of the remaining qubits");
        }
        net.routing = std::move(*routing);
    } else {
        for (int i = 0; i < n; ++i) {
            std::vector<int> rest;
            for (int q = 1; q <= n; ++q) {
                if (q != net.arrangement[i]) rest.push_back(q);
            }
            net.routing.push_back(std::move(rest));
        }
    }
    net.intermediate_bases.assign(n - 1, ghz_basis(n));
    return net;
}

std::vector<int> PartyLayout::party_order() const {
    std::vector<int> order;
    for (const auto& qubits : party_qubits) order.insert(order.end(), qubits.begin(), qubits.end());
    return order;
}

namespace {

void check_capacity(int qubits) {
    if (qubits > kMaxQubits) {
        throw CapacityError("joint register of " + std::to_string(qubits) + " qubits exceeds the " +
                            std::to_string(kMaxQubits) + "-qubit limit");
    }
}

void check_bases(const PartyLayout& layout) {
    const int k = layout.shape.intermediates;
    if (static_cast<int>(layout.intermediate_bases.size()) != k) throw InvalidArgument("need one basis per intermediate party");
    for (int j = 0; j < k; ++j) {
        const auto& basis = layout.intermediate_bases[j];
        const int held = static_cast<int>(layout.party_qubits[layout.shape.extremes + j].size());
        if (basis.arity != held || static_cast<int>(basis.size()) != (1 << held)) {
            throw InvalidArgument("intermediate basis " + std::to_string(j + 1) + " does not match the qubits held");
        }
    }
}

}  // namespace

PartyLayout layout_of(const LinearNetwork& net) {
    const int n = net.n();
    PartyLayout layout;
    layout.shape = DistributionShape::linear(n);
    layout.total_qubits = 2 * n;
    check_capacity(layout.total_qubits);
    layout.party_qubits.push_back({0});
    layout.party_qubits.push_back({2 * n - 1});
    for (int i = 2; i <= n; ++i) layout.party_qubits.push_back({2 * (i - 2) + 1, 2 * (i - 1)});
    layout.intermediate_bases = net.intermediate_bases;
    check_bases(layout);
    return layout;
}

PartyLayout layout_of(const NonlinearNetwork& net) {
    const int n = net.n();
    PartyLayout layout;
    layout.shape = DistributionShape::nonlinear(n);
    layout.total_qubits = n * n;
    check_capacity(layout.total_qubits);
    for (int i = 0; i < n; ++i) layout.party_qubits.push_back({n * i + net.arrangement[i] - 1});
    for (int j = 0; j < n - 1; ++j) {
        std::vector<int> held;
        for (int i = 0; i < n; ++i) held.push_back(n * i + net.routing[i][j] - 1);
        layout.party_qubits.push_back(std::move(held));
    }
    layout.intermediate_bases = net.intermediate_bases;
    check_bases(layout);
    return layout;
}

ComplexMatrix IntermediateReduction::operator_for(std::size_t b) const {
    return pure ? density(kets[b]) : operators[b];
}

namespace {

// Conjugated basis vectors as rows: row k is <v_k|.
ComplexMatrix bra_rows(const LabeledBasis& basis) {
    const Eigen::Index dim = basis.vectors.front().size();
    ComplexMatrix rows(static_cast<Eigen::Index>(basis.size()), dim);
    for (std::size_t k = 0; k < basis.size(); ++k) rows.row(static_cast<Eigen::Index>(k)) = basis.vectors[k].adjoint();
    return rows;
}

IntermediateReduction reduce_pure(const PartyLayout& layout, const ComplexVector& joint) {
    const auto order = layout.party_order();
    const ComplexVector ket = permute_qubits(joint, order);
    const auto& shape = layout.shape;
    const Eigen::Index label_count = static_cast<Eigen::Index>(shape.label_count());

    struct Partial {
        std::size_t index;
        ComplexVector v;
    };
    std::vector<Partial> current{{0, ket}};
    for (int j = shape.intermediates - 1; j >= 0; --j) {
        const auto& basis = layout.intermediate_bases[j];
        const ComplexMatrix bras = bra_rows(basis);
        const int shift = shape.label_bits * (shape.intermediates - 1 - j);
        std::vector<Partial> next;
        next.reserve(current.size() * basis.size());
        for (const auto& part : current) {
            const Eigen::Index rest = part.v.size() / label_count;
            Eigen::Map<const ComplexMatrix> m(part.v.data(), label_count, rest);
            const ComplexMatrix w = bras * m;
            for (std::size_t k = 0; k < basis.size(); ++k) {
                next.push_back({part.index | (std::size_t{basis.labels[k]} << shift),
                                w.row(static_cast<Eigen::Index>(k)).transpose()});
            }
        }
        current = std::move(next);
    }
    IntermediateReduction red;
    red.shape = shape;
    red.pure = true;
    red.kets.resize(shape.label_combo_count());
    for (auto& part : current) red.kets[part.index] = std::move(part.v);
    return red;
}

IntermediateReduction reduce_mixed(const PartyLayout& layout, const ComplexMatrix& joint) {
    const auto order = layout.party_order();
    const ComplexMatrix rho = permute_qubits(joint, order);
    const auto& shape = layout.shape;
    const Eigen::Index label_count = static_cast<Eigen::Index>(shape.label_count());

    struct Partial {
        std::size_t index;
        ComplexMatrix m;
    };
    std::vector<Partial> current{{0, rho}};
    for (int j = shape.intermediates - 1; j >= 0; --j) {
        const auto& basis = layout.intermediate_bases[j];
        const int shift = shape.label_bits * (shape.intermediates - 1 - j);
        std::vector<Partial> next;
        for (const auto& part : current) {
            const Eigen::Index rest = part.m.rows() / label_count;
            for (std::size_t k = 0; k < basis.size(); ++k) {
                const ComplexVector& v = basis.vectors[k];
                ComplexMatrix out = ComplexMatrix::Zero(rest, rest);
                for (Eigen::Index r = 0; r < rest; ++r) {
                    for (Eigen::Index s = 0; s < rest; ++s) {
                        const auto blk = part.m.block(r * label_count, s * label_count, label_count, label_count);
                        out(r, s) = v.dot(blk * v);  // dot conjugates v
                    }
                }
                next.push_back({part.index | (std::size_t{basis.labels[k]} << shift), std::move(out)});
            }
        }
        current = std::move(next);
    }
    IntermediateReduction red;
    red.shape = shape;
    red.pure = false;
    red.operators.resize(shape.label_combo_count());
    for (auto& part : current) red.operators[part.index] = std::move(part.m);
    return red;
}

ComplexVector joint_ket_of(const std::vector<SourceState>& sources) {
    std::vector<ComplexVector> kets;
    for (const auto& s : sources) kets.push_back(s.ket());
    return tensor_product(std::span<const ComplexVector>(kets));
}

ComplexMatrix joint_density_of(const std::vector<SourceState>& sources) {
    std::vector<ComplexMatrix> ops;
    for (const auto& s : sources) ops.push_back(s.as_density());
    return tensor_product(std::span<const ComplexMatrix>(ops));
}

bool all_pure(const std::vector<SourceState>& sources) {
    return std::all_of(sources.begin(), sources.end(), [](const SourceState& s) { return s.is_pure(); });
}

void check_settings(const DistributionShape& shape, const ExtremeSettings& settings) {
    if (static_cast<int>(settings.size()) != shape.extremes) {
        throw InvalidArgument("need two measurement directions for each of the " + std::to_string(shape.extremes) +
                              " extreme parties");
    }
}

// Column a holds the product eigenvector for outputs a under inputs x.
ComplexMatrix extreme_frame(const std::vector<std::array<LabeledBasis, 2>>& bases, std::size_t x) {
    const int e = static_cast<int>(bases.size());
    const Eigen::Index dim = Eigen::Index{1} << e;
    ComplexMatrix frame(dim, dim);
    for (Eigen::Index a = 0; a < dim; ++a) {
        ComplexVector v = ComplexVector::Ones(1);
        for (int i = 0; i < e; ++i) {
            const int xi = static_cast<int>((x >> (e - 1 - i)) & 1u);
            const int ai = static_cast<int>((a >> (e - 1 - i)) & 1);
            v = tensor_product(v, bases[i][xi].vectors[ai]);
        }
        frame.col(a) = v;
    }
    return frame;
}

std::vector<std::array<LabeledBasis, 2>> extreme_bases(const ExtremeSettings& settings) {
    std::vector<std::array<LabeledBasis, 2>> out;
    for (const auto& s : settings) out.push_back({qubit_basis(s[0]), qubit_basis(s[1])});
    return out;
}

ComplexVector product_projection_ket(const PartyLayout& layout, const std::vector<std::array<LabeledBasis, 2>>& ext,
                                     std::size_t x, std::size_t a, std::size_t b, const std::vector<int>& inverse) {
    const auto& shape = layout.shape;
    const int e = shape.extremes;
    ComplexVector v = ComplexVector::Ones(1);
    for (int i = 0; i < e; ++i) {
        const int xi = static_cast<int>((x >> (e - 1 - i)) & 1u);
        const int ai = static_cast<int>((a >> (e - 1 - i)) & 1u);
        v = tensor_product(v, ext[i][xi].vectors[ai]);
    }
    for (int j = 0; j < shape.intermediates; ++j) {
        const int shift = shape.label_bits * (shape.intermediates - 1 - j);
        const unsigned label = static_cast<unsigned>((b >> shift) & (shape.label_count() - 1));
        const auto& basis = layout.intermediate_bases[j];
        v = tensor_product(v, basis.vectors[basis.index_of(label)]);
    }
    return permute_qubits(v, inverse);
}

std::vector<int> inverse_order(const PartyLayout& layout) {
    const auto order = layout.party_order();
    std::vector<int> inv(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) inv[order[k]] = static_cast<int>(k);
    return inv;
}

}  // namespace

IntermediateReduction reduce(const LinearNetwork& net) {
    const auto layout = layout_of(net);
    if (all_pure(net.sources)) return reduce_pure(layout, joint_ket_of(net.sources));
    return reduce_mixed(layout, joint_density_of(net.sources));
}

IntermediateReduction reduce(const NonlinearNetwork& net) { return reduce_pure(layout_of(net), joint_ket(net)); }

ComplexVector joint_ket(const NonlinearNetwork& net) {
    check_capacity(net.n() * net.n());
    return tensor_product(std::span<const ComplexVector>(net.sources));
}

OutcomeDistribution joint_distribution(const IntermediateReduction& red, const ExtremeSettings& settings) {
    const auto& shape = red.shape;
    check_settings(shape, settings);
    const auto ext = extreme_bases(settings);
    const std::size_t combos = shape.label_combo_count();
    std::vector<double> p(shape.size());
    for (std::size_t x = 0; x < shape.input_count(); ++x) {
        const ComplexMatrix frame = extreme_frame(ext, x);
        const ComplexMatrix frame_adj = frame.adjoint();
        for (std::size_t b = 0; b < combos; ++b) {
            if (red.pure) {
                const ComplexVector amps = frame_adj * red.kets[b];
                for (std::size_t a = 0; a < shape.output_count(); ++a) {
                    p[(x * shape.output_count() + a) * combos + b] = std::norm(amps(static_cast<Eigen::Index>(a)));
                }
            } else {
                const ComplexMatrix m = frame_adj * red.operators[b] * frame;
                for (std::size_t a = 0; a < shape.output_count(); ++a) {
                    const auto i = static_cast<Eigen::Index>(a);
                    p[(x * shape.output_count() + a) * combos + b] = m(i, i).real();
                }
            }
        }
    }
    return OutcomeDistribution(shape, std::move(p));
}

OutcomeDistribution joint_distribution(const LinearNetwork& net, const ExtremeSettings& settings) {
    check_settings(layout_of(net).shape, settings);
    return joint_distribution(reduce(net), settings);
}

OutcomeDistribution joint_distribution(const NonlinearNetwork& net, const ExtremeSettings& settings) {
    check_settings(layout_of(net).shape, settings);
    return joint_distribution(reduce(net), settings);
}

OutcomeDistribution joint_distribution_dense(const LinearNetwork& net, const ExtremeSettings& settings) {
    const auto layout = layout_of(net);
    const auto& shape = layout.shape;
    check_settings(shape, settings);
    const auto ext = extreme_bases(settings);
    const auto inv = inverse_order(layout);
    const bool pure = all_pure(net.sources);
    const ComplexVector ket = pure ? joint_ket_of(net.sources) : ComplexVector();
    const ComplexMatrix rho = pure ? ComplexMatrix() : joint_density_of(net.sources);
    std::vector<double> p(shape.size());
    for (std::size_t x = 0; x < shape.input_count(); ++x) {
        for (std::size_t a = 0; a < shape.output_count(); ++a) {
            for (std::size_t b = 0; b < shape.label_combo_count(); ++b) {
                const ComplexVector phi = product_projection_ket(layout, ext, x, a, b, inv);
                const double prob = pure ? std::norm(phi.dot(ket)) : phi.dot(rho * phi).real();
                p[(x * shape.output_count() + a) * shape.label_combo_count() + b] = prob;
            }
        }
    }
    return OutcomeDistribution(shape, std::move(p));
}

OutcomeDistribution joint_distribution_dense(const NonlinearNetwork& net, const ExtremeSettings& settings) {
    const auto layout = layout_of(net);
    const auto& shape = layout.shape;
    check_settings(shape, settings);
    const auto ext = extreme_bases(settings);
    const auto inv = inverse_order(layout);
    const ComplexVector ket = joint_ket(net);
    std::vector<double> p(shape.size());
    for (std::size_t x = 0; x < shape.input_count(); ++x) {
        for (std::size_t a = 0; a < shape.output_count(); ++a) {
            for (std::size_t b = 0; b < shape.label_combo_count(); ++b) {
                const ComplexVector phi = product_projection_ket(layout, ext, x, a, b, inv);
                p[(x * shape.output_count() + a) * shape.label_combo_count() + b] = std::norm(phi.dot(ket));
            }
        }
    }
    return OutcomeDistribution(shape, std::move(p));
}

double dense_probability(const NonlinearNetwork& net, const ExtremeSettings& settings, std::size_t x, std::size_t a,
                         std::size_t b) {
    const auto layout = layout_of(net);
    check_settings(layout.shape, settings);
    const auto ext = extreme_bases(settings);
    const ComplexVector phi = product_projection_ket(layout, ext, x, a, b, inverse_order(layout));
    return std::norm(phi.dot(joint_ket(net)));
}

}  // namespace nlocal
