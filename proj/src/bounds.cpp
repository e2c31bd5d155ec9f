#include "nlocal/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "nlocal/error.hpp"
#include "nlocal/states.hpp"

namespace nlocal {

double bound_linear_pure(std::span<const double> gamma0s) {
    if (gamma0s.empty()) throw InvalidArgument("bound_linear_pure: no sources");
    double product = 1.0;
    for (double g0 : gamma0s) {
        if (!(g0 >= 0.0 && g0 <= 1.0)) throw InvalidArgument("Schmidt coefficient outside [0, 1]");
        product *= 2.0 * g0 * std::sqrt(std::max(0.0, 1.0 - g0 * g0));
    }
    return std::sqrt(1.0 + product);
}

double bound_linear_mixed(std::span<const std::array<double, 3>> lambdas) {
    if (lambdas.empty()) throw InvalidArgument("bound_linear_mixed: no sources");
    double p1 = 1.0, p2 = 1.0;
    for (const auto& l : lambdas) {
        if (l[0] < l[1] || l[1] < l[2]) throw InvalidArgument("singular values must be sorted descending");
        if (l[2] < 0.0 || l[0] > 1.0 + kTolerance) throw InvalidArgument("singular values outside [0, 1]");
        p1 *= l[0];
        p2 *= l[1];
    }
    return std::sqrt(p1 + p2);
}

double chsh_horodecki(const ComplexMatrix& rho) {
    const auto ct = correlation_tensor(rho);
    return std::hypot(ct.lambdas[0], ct.lambdas[1]);
}

double bound_bisep_231(double c0) {
    if (!(c0 >= 0.0 && c0 <= 1.0)) throw InvalidArgument("c0 outside [0, 1]");
    const double c1 = std::sqrt(std::max(0.0, 1.0 - c0 * c0));
    const double first = std::pow(2.0, 2.0 / 3.0) * std::abs(c0 * c1);
    const double second = std::cbrt(std::pow(c0, 4) + 4.0 * std::pow(c0, 3) * std::pow(c1, 3) + std::pow(c1, 4));
    return std::max(first, second);
}

BoundResult bound_linear_pure_result(std::span<const double> gamma0s) {
    return {bound_linear_pure(gamma0s), "sqrt(1 + 2^n prod gamma0 gamma1)", {gamma0s.begin(), gamma0s.end()}};
}

BoundResult bound_linear_mixed_result(std::span<const std::array<double, 3>> lambdas) {
    std::vector<double> flat;
    for (const auto& l : lambdas) flat.insert(flat.end(), l.begin(), l.end());
    return {bound_linear_mixed(lambdas), "sqrt(prod lambda1 + prod lambda2)", flat};
}

BoundResult chsh_horodecki_result(const ComplexMatrix& rho) {
    const auto ct = correlation_tensor(rho);
    return {std::hypot(ct.lambdas[0], ct.lambdas[1]), "sqrt(lambda1^2 + lambda2^2)",
            {ct.lambdas.begin(), ct.lambdas.end()}};
}

BoundResult bound_bisep_231_result(double c0) {
    return {bound_bisep_231(c0), "max(2^(2/3)|c0 c1|, (c0^4 + 4 c0^3 c1^3 + c1^4)^(1/3))", {c0}};
}

}  // namespace nlocal
