#include "nlocal/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlocal/error.hpp"

namespace nlocal {

namespace {

void require_unit_interval(double value, const char* what) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw InvalidArgument(std::string(what) + " must lie in [0, 1], got " + std::to_string(value));
    }
}

ComplexVector basis_ket(int qubits, Eigen::Index index) {
    ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << qubits);
    v(index) = 1.0;
    return v;
}

}  // namespace

std::string to_string(Cut cut) {
    switch (cut) {
        case Cut::k12_3: return "12|3";
        case Cut::k13_2: return "13|2";
        case Cut::k23_1: return "23|1";
    }
    return "?";
}

Cut parse_cut(std::string_view text) {
    if (text == "12|3" || text == "12/3") return Cut::k12_3;
    if (text == "13|2" || text == "13/2") return Cut::k13_2;
    if (text == "23|1" || text == "23/1") return Cut::k23_1;
    throw InvalidArgument("unknown cut tag '" + std::string(text) + "'");
}

ComplexVector pure_schmidt(double gamma0) {
    require_unit_interval(gamma0, "gamma0");
    ComplexVector v = ComplexVector::Zero(4);
    v(0) = gamma0;
    v(3) = std::sqrt(std::max(0.0, 1.0 - gamma0 * gamma0));
    return v;
}

ComplexVector gghz(double beta) {
    if (!(beta >= 0.0 && beta <= std::numbers::pi / 4 + 1e-12)) {
        throw InvalidArgument("GGHZ angle must lie in [0, pi/4], got " + std::to_string(beta));
    }
    ComplexVector v = ComplexVector::Zero(8);
    v(0) = std::cos(beta);
    v(7) = std::sin(beta);
    return v;
}

ComplexVector w_state(double omega1, double omega2) {
    if (!std::isfinite(omega1) || !std::isfinite(omega2)) throw InvalidArgument("W angles must be finite");
    ComplexVector v = ComplexVector::Zero(8);
    v(1) = std::cos(omega2) * std::sin(omega1);  // |001>
    v(2) = std::sin(omega2) * std::sin(omega1);  // |010>
    v(4) = std::cos(omega1);                     // |100>
    return v;
}

ComplexVector biseparable(const BisepParams& p) {
    require_unit_interval(p.c0, "c0");
    require_unit_interval(p.v0, "v0");
    const double c1 = std::sqrt(std::max(0.0, 1.0 - p.c0 * p.c0));
    const double v1 = std::sqrt(std::max(0.0, 1.0 - p.v0 * p.v0));
    // Pair qubits (p, q) and single qubit s; place them by cut.
    ComplexVector out = ComplexVector::Zero(8);
    for (int pair = 0; pair < 2; ++pair) {
        const double amp_pair = pair == 0 ? p.c0 : c1;
        for (int s = 0; s < 2; ++s) {
            const double amp = amp_pair * (s == 0 ? p.v0 : v1);
            int bits[3] = {0, 0, 0};
            switch (p.cut) {
                case Cut::k12_3: bits[0] = pair, bits[1] = pair, bits[2] = s; break;
                case Cut::k13_2: bits[0] = pair, bits[1] = s, bits[2] = pair; break;
                case Cut::k23_1: bits[0] = s, bits[1] = pair, bits[2] = pair; break;
            }
            out(bits[0] * 4 + bits[1] * 2 + bits[2]) += amp;
        }
    }
    return out;
}

ComplexVector product3(const std::array<std::array<Complex, 2>, 3>& amplitudes) {
    ComplexVector out = ComplexVector::Ones(1);
    for (const auto& pair : amplitudes) {
        const double norm2 = std::norm(pair[0]) + std::norm(pair[1]);
        if (std::abs(norm2 - 1.0) > kTolerance) throw InvalidArgument("product3: single-qubit amplitudes not normalized");
        ComplexVector q(2);
        q << pair[0], pair[1];
        out = tensor_product(out, q);
    }
    return out;
}

ComplexVector nghz(int n) {
    if (n < 2 || n > 4) throw InvalidArgument("nghz: n must lie in [2, 4]");
    ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << n);
    v(0) = std::numbers::sqrt2 / 2;
    v(v.size() - 1) = std::numbers::sqrt2 / 2;
    return v;
}

ComplexVector even_symmetric(double alpha) {
    require_unit_interval(alpha, "alpha");
    const double b = std::sqrt((1.0 - alpha * alpha) / 3.0);
    ComplexVector v = ComplexVector::Zero(8);
    v(0) = alpha;
    v(3) = v(5) = v(6) = b;
    return v;
}

ComplexVector phi_plus() { return (basis_ket(2, 0) + basis_ket(2, 3)) / std::numbers::sqrt2; }
ComplexVector phi_minus() { return (basis_ket(2, 0) - basis_ket(2, 3)) / std::numbers::sqrt2; }
ComplexVector psi_plus() { return (basis_ket(2, 1) + basis_ket(2, 2)) / std::numbers::sqrt2; }
ComplexVector psi_minus() { return (basis_ket(2, 1) - basis_ket(2, 2)) / std::numbers::sqrt2; }

ComplexMatrix werner(double v) {
    require_unit_interval(v, "Werner visibility");
    return v * density(psi_minus()) + (1.0 - v) * ComplexMatrix::Identity(4, 4) / 4.0;
}

CorrelationTensor correlation_tensor(const ComplexMatrix& rho) {
    if (rho.rows() != 4 || !is_density_matrix(rho)) {
        throw InvalidArgument("correlation_tensor: input is not a two-qubit density matrix");
    }
    const std::array<Matrix2c, 3> sigma{pauli::x(), pauli::y(), pauli::z()};
    CorrelationTensor out;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            out.t(i, j) = expectation(rho, tensor_product(ComplexMatrix(sigma[i]), ComplexMatrix(sigma[j]))).real();
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(out.t.transpose() * out.t, Eigen::EigenvaluesOnly);
    const Eigen::Vector3d ev = solver.eigenvalues();  // ascending
    for (int k = 0; k < 3; ++k) out.lambdas[k] = std::sqrt(std::max(0.0, ev(2 - k)));
    return out;
}

ComplexMatrix random_density_matrix(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) g(i, j) = Complex(normal(rng), normal(rng));
    }
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return 0.5 * (rho + rho.adjoint());
}

Matrix2c random_unitary2(std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix2c z;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) z(i, j) = Complex(normal(rng), normal(rng));
    }
    Eigen::HouseholderQR<Matrix2c> qr(z);
    Matrix2c q = qr.householderQ();
    const Matrix2c r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < 2; ++k) {
        const Complex d = r(k, k);
        const Complex phase = std::abs(d) > 0 ? d / std::abs(d) : Complex(1.0);
        q.col(k) *= phase;
    }
    return q;
}

std::array<Complex, 2> random_qubit(std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Complex a(normal(rng), normal(rng));
    Complex b(normal(rng), normal(rng));
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    return {a / n, b / n};
}

}  // namespace nlocal
