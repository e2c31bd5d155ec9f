#include <gtest/gtest.h>

#include <random>

#include "nlocal/bounds.hpp"
#include "nlocal/error.hpp"
#include "nlocal/states.hpp"

using namespace nlocal;

namespace {

std::array<double, 3> lambdas_of(const ComplexMatrix& rho) { return correlation_tensor(rho).lambdas; }

}  // namespace

TEST(BoundLinearPure, Examples) {
    const double r = 1 / std::sqrt(2.0);
    const std::vector<double> max2{r, r};
    EXPECT_NEAR(bound_linear_pure(max2), std::sqrt(2.0), 1e-12);
    for (int n = 2; n <= 5; ++n) {
        std::vector<double> g(n, 0.8);
        g[n / 2] = 1.0;
        EXPECT_NEAR(bound_linear_pure(g), 1.0, 1e-15);
    }
    // sqrt(1 + 4 (0.9 * 0.435890)^2); see the decisions log for the spec's 1.271075.
    const std::vector<double> g09{0.9, 0.9};
    const double prod = 0.9 * std::sqrt(1 - 0.81);
    EXPECT_NEAR(bound_linear_pure(g09), std::sqrt(1 + 4 * prod * prod), 1e-15);
    EXPECT_NEAR(bound_linear_pure(g09), 1.271063, 1e-6);
    const std::vector<double> bad{0.5, 1.2};
    EXPECT_THROW(bound_linear_pure(bad), InvalidArgument);
}

TEST(BoundLinearPure, AtMostSqrtTwoAndMonotone) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 500; ++t) {
        const int n = 2 + t % 4;
        std::vector<double> g(n);
        for (auto& v : g) v = u(rng);
        const double b = bound_linear_pure(g);
        EXPECT_LE(b, std::sqrt(2.0) + 1e-12);
        EXPECT_GE(b, 1.0);
        // Moving one gamma0 toward 1/sqrt2 raises gamma0*gamma1.
        auto h = g;
        h[0] = (h[0] + 1 / std::sqrt(2.0)) / 2;
        EXPECT_GE(bound_linear_pure(h), b - 1e-15);
    }
    std::vector<double> almost{0.70, 1 / std::sqrt(2.0)};
    EXPECT_LT(bound_linear_pure(almost), std::sqrt(2.0));
}

TEST(BoundLinearMixed, Examples) {
    const auto w = lambdas_of(werner(0.8));
    const std::vector<std::array<double, 3>> two_w{w, w};
    EXPECT_NEAR(bound_linear_mixed(two_w), std::sqrt(0.64 + 0.64), 1e-9);
    EXPECT_NEAR(bound_linear_mixed(two_w), 1.131371, 1e-6);
    const std::vector<std::array<double, 3>> bell{{1, 1, 1}, {1, 1, 1}};
    EXPECT_NEAR(bound_linear_mixed(bell), std::sqrt(2.0), 1e-15);
    const std::vector<std::array<double, 3>> classical(3, {1, 0, 0});
    EXPECT_NEAR(bound_linear_mixed(classical), 1.0, 1e-15);
    const std::vector<std::array<double, 3>> unsorted{{0.1, 0.5, 0.0}, {1, 1, 1}};
    EXPECT_THROW(bound_linear_mixed(unsorted), InvalidArgument);
}

TEST(BoundLinearMixed, PureStatesReduceToPureBound) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        const std::vector<double> g{u(rng), u(rng), u(rng)};
        std::vector<std::array<double, 3>> l;
        for (double v : g) l.push_back(lambdas_of(density(pure_schmidt(v))));
        EXPECT_NEAR(bound_linear_mixed(l), bound_linear_pure(g), 1e-9);
    }
}

TEST(ChshHorodecki, Examples) {
    EXPECT_NEAR(chsh_horodecki(density(psi_minus())), std::sqrt(2.0), 1e-9);
    EXPECT_NEAR(chsh_horodecki(ComplexMatrix::Identity(4, 4) / 4.0), 0.0, 1e-12);
    EXPECT_NEAR(chsh_horodecki(werner(0.6)), 0.848528, 1e-6);
    EXPECT_THROW(chsh_horodecki(ComplexMatrix::Identity(4, 4)), InvalidArgument);
}

TEST(ChshHorodecki, ChainImpliesNoNetworkViolation) {
    // If no source is CHSH nonlocal, the chain bound cannot exceed 1.
    std::mt19937_64 rng(17);
    for (int n = 2; n <= 3; ++n) {
        for (int t = 0; t < 1000; ++t) {
            std::vector<std::array<double, 3>> l;
            bool all_local = true;
            for (int i = 0; i < n; ++i) {
                const auto rho = random_density_matrix(rng);
                all_local = all_local && chsh_horodecki(rho) <= 1.0;
                l.push_back(lambdas_of(rho));
            }
            if (all_local) EXPECT_LE(bound_linear_mixed(l), 1.0 + 1e-9);
        }
    }
}

TEST(BoundBisep231, Examples) {
    EXPECT_NEAR(bound_bisep_231(1.0), 1.0, 1e-15);
    // At c0 = 1/sqrt2 the quartic terms give 1/4 + 1/4 and the cross term 1/2.
    EXPECT_NEAR(bound_bisep_231(1 / std::sqrt(2.0)), 1.0, 1e-12);
    // (0.6^4 + 4 0.6^3 0.8^3 + 0.8^4)^(1/3); the spec's 0.994096 is an arithmetic slip.
    EXPECT_NEAR(bound_bisep_231(0.6), std::cbrt(0.1296 + 0.442368 + 0.4096), 1e-12);
    EXPECT_NEAR(bound_bisep_231(0.6), 0.993818, 1e-6);
    EXPECT_THROW(bound_bisep_231(1.5), InvalidArgument);
}

TEST(BoundBisep231, NeverAboveOne) {
    for (int i = 0; i <= 1000; ++i) EXPECT_LE(bound_bisep_231(i * 1e-3), 1.0 + 1e-9) << i;
}

TEST(BoundResult, EchoesInputs) {
    const auto r = bound_bisep_231_result(0.6);
    EXPECT_EQ(r.inputs, std::vector<double>{0.6});
    EXPECT_FALSE(r.formula.empty());
    EXPECT_DOUBLE_EQ(r.value, bound_bisep_231(0.6));
    EXPECT_NEAR(chsh_horodecki_result(werner(0.6)).value, 0.848528, 1e-6);
}
