#include <gtest/gtest.h>

#include <numbers>
#include <random>
#include <sstream>

#include "nlocal/distribution.hpp"
#include "nlocal/error.hpp"
#include "nlocal/lhv.hpp"
#include "nlocal/network.hpp"
#include "nlocal/states.hpp"
#include "oracle.hpp"

using namespace nlocal;
using std::numbers::pi;

namespace {

ExtremeSettings z_settings(int extremes) { return ExtremeSettings(extremes, {Direction{0, 0}, Direction{0, 0}}); }

std::vector<int> random_arrangement(std::mt19937_64& rng, int n) {
    std::uniform_int_distribution<int> pick(1, n);
    std::vector<int> a(n);
    for (auto& v : a) v = pick(rng);
    return a;
}

std::vector<std::vector<int>> random_routing(std::mt19937_64& rng, const std::vector<int>& arrangement) {
    const int n = static_cast<int>(arrangement.size());
    std::vector<std::vector<int>> r(n);
    for (int i = 0; i < n; ++i) {
        for (int q = 1; q <= n; ++q)
            if (q != arrangement[i]) r[i].push_back(q);
        std::shuffle(r[i].begin(), r[i].end(), rng);
    }
    return r;
}

// Basis measured on the two qubits in reverse order.
LabeledBasis swapped(const LabeledBasis& b) {
    LabeledBasis out = b;
    for (auto& v : out.vectors) {
        ComplexVector w(4);
        w << v(0), v(2), v(1), v(3);
        v = w;
    }
    return out;
}

}  // namespace

TEST(BuildLinear, AssignsChainQubits) {
    std::vector<SourceState> s{pure_schmidt(0.8), pure_schmidt(0.7), pure_schmidt(0.6)};
    const auto net = build_linear(s);
    const auto layout = layout_of(net);
    ASSERT_EQ(layout.party_qubits.size(), 4u);
    EXPECT_EQ(layout.party_qubits[0], std::vector<int>{0});
    EXPECT_EQ(layout.party_qubits[1], std::vector<int>{5});
    EXPECT_EQ(layout.party_qubits[2], (std::vector<int>{1, 2}));  // P_2: qubit 2 of source 1, qubit 1 of source 2
    EXPECT_EQ(layout.party_qubits[3], (std::vector<int>{3, 4}));
    EXPECT_EQ(net.intermediate_bases.size(), 2u);
}

TEST(BuildLinear, AcceptsMixedAndRejectsBadShapes) {
    EXPECT_NO_THROW(build_linear({werner(0.8), werner(0.8)}));
    EXPECT_THROW(build_linear({phi_plus()}), InvalidArgument);
    EXPECT_THROW(build_linear({phi_plus(), nghz(3)}), InvalidArgument);
    std::vector<SourceState> six(6, phi_plus());
    EXPECT_THROW(build_linear(six), InvalidArgument);
}

TEST(BuildNonlinear, ArrangementOneOneOne) {
    const auto net = build_nonlinear({nghz(3), nghz(3), nghz(3)}, {1, 1, 1});
    const auto layout = layout_of(net);
    EXPECT_EQ(layout.party_qubits[0], std::vector<int>{0});
    EXPECT_EQ(layout.party_qubits[1], std::vector<int>{3});
    EXPECT_EQ(layout.party_qubits[2], std::vector<int>{6});
    EXPECT_EQ(layout.party_qubits[3], (std::vector<int>{1, 4, 7}));  // qubit 2 of each
    EXPECT_EQ(layout.party_qubits[4], (std::vector<int>{2, 5, 8}));  // qubit 3 of each
}

TEST(BuildNonlinear, ArrangementTwoTwoTwo) {
    const auto layout = layout_of(build_nonlinear({nghz(3), nghz(3), nghz(3)}, {2, 2, 2}));
    EXPECT_EQ(layout.party_qubits[0], std::vector<int>{1});
    EXPECT_EQ(layout.party_qubits[1], std::vector<int>{4});
    EXPECT_EQ(layout.party_qubits[2], std::vector<int>{7});
    EXPECT_EQ(layout.party_qubits[3], (std::vector<int>{0, 3, 6}));
    EXPECT_EQ(layout.party_qubits[4], (std::vector<int>{2, 5, 8}));
}

TEST(BuildNonlinear, FourSourcesUseSixteenQubits) {
    const auto net = build_nonlinear({nghz(4), nghz(4), nghz(4), nghz(4)}, {1, 1, 1, 1});
    EXPECT_EQ(layout_of(net).total_qubits, 16);
    EXPECT_EQ(net.intermediate_bases.size(), 3u);
}

TEST(BuildNonlinear, RejectsInvalidInput) {
    EXPECT_THROW(build_nonlinear({nghz(3), nghz(3)}, {1, 1}), InvalidArgument);
    EXPECT_THROW(build_nonlinear({nghz(3), nghz(3), nghz(4)}, {1, 1, 1}), InvalidArgument);
    EXPECT_THROW(build_nonlinear({nghz(3), nghz(3), nghz(3)}, {1, 4, 1}), InvalidArgument);
    EXPECT_THROW(build_nonlinear({nghz(3), nghz(3), nghz(3)}, {1, 1, 1}, std::vector<std::vector<int>>{{2, 3}, {3, 3}, {2, 3}}),
                 InvalidArgument);
}

TEST(BuildNonlinear, RegisterAboveSixteenQubitsIsACapacityError) {
    ComplexVector ghz5 = ComplexVector::Zero(32);
    ghz5(0) = ghz5(31) = 1 / std::sqrt(2.0);
    NonlinearNetwork net;
    net.sources.assign(5, ghz5);
    net.arrangement.assign(5, 1);
    net.routing.assign(5, {2, 3, 4, 5});
    EXPECT_THROW(joint_distribution(net, z_settings(5)), CapacityError);
    EXPECT_THROW(joint_ket(net), CapacityError);
}

TEST(JointDistribution, BilocalSwappingMarginal) {
    const auto d = joint_distribution(build_linear({phi_plus(), phi_plus()}), z_settings(2));
    for (std::size_t x = 0; x < 4; ++x) {
        for (unsigned b = 0; b < 4; ++b) {
            double marginal = 0.0;
            for (std::size_t a = 0; a < 4; ++a) marginal += d(x, a, b);
            EXPECT_NEAR(marginal, 0.25, 1e-12);
        }
    }
}

TEST(JointDistribution, LinearMatchesNaiveOracle) {
    std::mt19937_64 rng(31);
    for (int n = 2; n <= 3; ++n) {
        for (int t = 0; t < 3; ++t) {
            std::vector<SourceState> states;
            std::vector<ComplexMatrix> rhos;
            for (int i = 0; i < n; ++i) {
                if (t == 0) {
                    const auto v = oracle::random_ket(rng, 4);
                    states.emplace_back(v);
                    rhos.push_back(oracle::outer(v));
                } else {
                    const auto r = random_density_matrix(rng);
                    states.emplace_back(r);
                    rhos.push_back(r);
                }
            }
            auto net = build_linear(states);
            if (t == 2) {
                for (auto& b : net.intermediate_bases) {
                    const std::array<Matrix2c, 2> u{random_unitary2(rng), random_unitary2(rng)};
                    b = rotate_basis(b, u);
                }
            }
            const auto s = oracle::random_settings(rng, 2);
            const auto expected = oracle::linear_table(rhos, s, net.intermediate_bases);
            EXPECT_LT(oracle::max_diff(joint_distribution(net, s).data(), expected), 1e-12) << "n=" << n << " t=" << t;
            EXPECT_LT(oracle::max_diff(joint_distribution_dense(net, s).data(), expected), 1e-12);
        }
    }
}

TEST(JointDistribution, NonlinearMatchesNaiveOracle) {
    std::mt19937_64 rng(37);
    for (int t = 0; t < 3; ++t) {
        std::vector<ComplexVector> states;
        for (int i = 0; i < 3; ++i) states.push_back(oracle::random_ket(rng, 8));
        const auto arrangement = random_arrangement(rng, 3);
        const auto routing = random_routing(rng, arrangement);
        const auto net = build_nonlinear(states, arrangement, routing);
        const auto s = oracle::random_settings(rng, 3);
        const auto expected = oracle::nonlinear_table(states, arrangement, routing, s);
        const auto fast = joint_distribution(net, s);
        EXPECT_EQ(fast.data().size(), 4096u);
        EXPECT_LT(oracle::max_diff(fast.data(), expected), 1e-12);
        EXPECT_LT(oracle::max_diff(joint_distribution_dense(net, s).data(), expected), 1e-12);
    }
}

TEST(JointDistribution, FourSourceCellsMatchReference) {
    // Reduced check at n = 4: a handful of cells against the oracle's
    // amplitude sum and the library's dense path.
    std::mt19937_64 rng(41);
    std::vector<ComplexVector> states;
    for (int i = 0; i < 4; ++i) states.push_back(oracle::random_ket(rng, 16));
    const std::vector<int> arrangement{1, 3, 2, 4};
    const auto routing = random_routing(rng, arrangement);
    const auto net = build_nonlinear(states, arrangement, routing);
    const auto s = oracle::random_settings(rng, 4);
    const auto d = joint_distribution(net, s);
    EXPECT_LT(d.normalization_defect(), 1e-9);

    ComplexVector psi = states[0];
    for (int i = 1; i < 4; ++i) psi = oracle::kron(psi, states[i]);
    std::vector<oracle::Party> parties;
    for (int e = 0; e < 4; ++e) parties.push_back({{4 * e + arrangement[e] - 1}});
    for (int j = 0; j < 3; ++j) {
        oracle::Party p;
        for (int i = 0; i < 4; ++i) p.qubits.push_back(4 * i + routing[i][j] - 1);
        parties.push_back(p);
    }
    const auto g = ghz_basis(4);
    std::uniform_int_distribution<std::size_t> pick_x(0, 15), pick_a(0, 15), pick_b(0, 4095);
    for (int c = 0; c < 6; ++c) {
        const std::size_t x = pick_x(rng), a = pick_a(rng), b = pick_b(rng);
        std::vector<ComplexVector> vs;
        for (int e = 0; e < 4; ++e) {
            const auto qb = qubit_basis(s[e][oracle::bit(x, e, 4)]);
            vs.push_back(qb.vectors[qb.index_of(oracle::bit(a, e, 4))]);
        }
        for (int j = 0; j < 3; ++j) vs.push_back(g.vectors[g.index_of(d.label_of(b, j))]);
        const double expected = oracle::born_pure(psi, parties, vs);
        EXPECT_NEAR(d(x, a, b), expected, 1e-12);
        EXPECT_NEAR(dense_probability(net, s, x, a, b), expected, 1e-12);
    }
}

TEST(JointDistribution, SwappingIntermediateQubitsWithBasisReorder) {
    std::mt19937_64 rng(43);
    std::vector<SourceState> states{oracle::random_ket(rng, 4), oracle::random_ket(rng, 4)};
    std::vector<ComplexMatrix> rhos{oracle::outer(states[0].ket()), oracle::outer(states[1].ket())};
    auto net = build_linear(states);
    const std::array<Matrix2c, 2> u{random_unitary2(rng), random_unitary2(rng)};
    net.intermediate_bases[0] = rotate_basis(bell_basis(), u);
    const auto s = oracle::random_settings(rng, 2);

    // Oracle: the intermediate holds its qubits as (source 2 qubit 1,
    // source 1 qubit 2) and measures the correspondingly reordered basis.
    std::vector<oracle::Party> parties{{{0}}, {{3}}, {{2, 1}}};
    const auto expected = oracle::table(ComplexVector(), oracle::joint_density(rhos), parties, 2,
                                        {swapped(net.intermediate_bases[0])}, s, DistributionShape::linear(2));
    EXPECT_LT(oracle::max_diff(joint_distribution(net, s).data(), expected), 1e-12);
}

TEST(JointDistribution, NormalizedAndNoSignaling) {
    std::mt19937_64 rng(47);
    for (int t = 0; t < 5; ++t) {
        std::vector<SourceState> lin;
        for (int i = 0; i < 3; ++i) lin.emplace_back(random_density_matrix(rng));
        const auto d1 = joint_distribution(build_linear(lin), oracle::random_settings(rng, 2));
        EXPECT_LT(d1.normalization_defect(), 1e-9);
        EXPECT_TRUE(check_no_signaling(d1).ok);

        std::vector<ComplexVector> non;
        for (int i = 0; i < 3; ++i) non.push_back(oracle::random_ket(rng, 8));
        const auto d2 = joint_distribution(build_nonlinear(non, random_arrangement(rng, 3)), oracle::random_settings(rng, 3));
        EXPECT_LT(d2.normalization_defect(), 1e-9);
        const auto ns = check_no_signaling(d2);
        EXPECT_TRUE(ns.ok);
        EXPECT_LT(ns.max_deviation, 1e-9);
    }
}

TEST(JointDistribution, ProductSourcesFactorizeGivenIntermediates) {
    std::mt19937_64 rng(53);
    std::vector<ComplexVector> states;
    for (int i = 0; i < 3; ++i) {
        const auto q = [&] { return random_qubit(rng); };
        states.push_back(product3({q(), q(), q()}));
    }
    const auto d = joint_distribution(build_nonlinear(states, {1, 2, 3}), oracle::random_settings(rng, 3));
    const auto& shape = d.shape();
    for (std::size_t x = 0; x < shape.input_count(); ++x) {
        for (std::size_t b = 0; b < shape.label_combo_count(); ++b) {
            double pb = 0.0;
            std::array<std::array<double, 2>, 3> marg{};
            for (std::size_t a = 0; a < shape.output_count(); ++a) {
                pb += d(x, a, b);
                for (int e = 0; e < 3; ++e) marg[e][oracle::bit(a, e, 3)] += d(x, a, b);
            }
            if (pb < 1e-14) continue;
            for (std::size_t a = 0; a < shape.output_count(); ++a) {
                double prod = pb;
                for (int e = 0; e < 3; ++e) prod *= marg[e][oracle::bit(a, e, 3)] / pb;
                EXPECT_NEAR(d(x, a, b), prod, 1e-12);
            }
        }
    }
}

TEST(NoSignaling, DetectsSignalingTable) {
    // P(a1 | x1, x2) depends on x2.
    const auto shape = DistributionShape::linear(2);
    std::vector<double> p(shape.size(), 0.0);
    for (std::size_t x = 0; x < 4; ++x) {
        const std::size_t x2 = x & 1u;
        const std::size_t a = x2 ? 0b10 : 0b00;
        p[(x * shape.output_count() + a) * shape.label_combo_count()] = 1.0;
    }
    const OutcomeDistribution d(shape, p);
    const auto r = check_no_signaling(d);
    EXPECT_FALSE(r.ok);
    EXPECT_NEAR(r.max_deviation, 1.0, 1e-12);
}

TEST(NoSignaling, ClassicalModelsPass) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        EXPECT_TRUE(check_no_signaling(model_distribution(sample_model(Topology::Linear, 3, 3, seed))).ok);
        EXPECT_TRUE(check_no_signaling(model_distribution(sample_model(Topology::Nonlinear, 3, 3, seed))).ok);
    }
}

TEST(OutcomeDistribution, ValidatesEntries) {
    const auto shape = DistributionShape::linear(2);
    std::vector<double> p(shape.size(), 0.0);
    for (std::size_t x = 0; x < 4; ++x) p[x * shape.cells_per_input()] = 1.0;
    p[1] = -5e-13;
    const OutcomeDistribution ok(shape, p);
    EXPECT_EQ(ok(0, 0, 1), 0.0);
    p[1] = -1e-6;
    EXPECT_THROW(OutcomeDistribution(shape, p), ConsistencyError);
    p.pop_back();
    EXPECT_THROW(OutcomeDistribution(shape, p), InvalidArgument);
}

TEST(OutcomeDistribution, MixIsConvex) {
    const auto a = model_distribution(sample_model(Topology::Linear, 2, 2, 1));
    const auto b = model_distribution(sample_model(Topology::Linear, 2, 2, 2));
    const auto m = mix(a, b, 0.25);
    for (std::size_t i = 0; i < m.data().size(); ++i)
        EXPECT_NEAR(m.data()[i], 0.25 * a.data()[i] + 0.75 * b.data()[i], 1e-15);
    EXPECT_THROW(mix(a, b, 1.5), InvalidArgument);
}

TEST(OutcomeDistribution, CsvHasOneRowPerCell) {
    const auto d = joint_distribution(build_linear({phi_plus(), phi_plus()}), z_settings(2));
    std::ostringstream os;
    write_csv(os, d);
    std::istringstream in(os.str());
    std::string header, line;
    std::getline(in, header);
    EXPECT_EQ(header, "x1,x2,a1,a2,b1,probability");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, static_cast<int>(d.shape().size()));
}
