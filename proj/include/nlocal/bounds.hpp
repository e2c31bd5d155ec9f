#pragma once

// Closed-form maxima of the network inequalities and the CHSH criterion.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "nlocal/linalg.hpp"

namespace nlocal {

struct BoundResult {
    double value = 0.0;
    std::string formula;
    std::vector<double> inputs;
};

// sqrt(1 + 2^n prod_i gamma0_i gamma1_i) over n Schmidt sources.
double bound_linear_pure(std::span<const double> gamma0s);

// sqrt(prod_j lambda1^(j) + prod_j lambda2^(j)); each triple descending.
double bound_linear_mixed(std::span<const std::array<double, 3>> lambdas);

// sqrt(lambda1^2 + lambda2^2) of the state's correlation tensor.
double chsh_horodecki(const ComplexMatrix& rho);

// Max[2^{2/3}|c0 c1|, (c0^4 + 4 c0^3 c1^3 + c1^4)^{1/3}] for identical
// 23|1 biseparable sources with the first qubit at the extreme parties.
double bound_bisep_231(double c0);

BoundResult bound_linear_pure_result(std::span<const double> gamma0s);
BoundResult bound_linear_mixed_result(std::span<const std::array<double, 3>> lambdas);
BoundResult chsh_horodecki_result(const ComplexMatrix& rho);
BoundResult bound_bisep_231_result(double c0);

}  // namespace nlocal
