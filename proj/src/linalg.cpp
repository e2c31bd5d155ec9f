#include "nlocal/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "nlocal/error.hpp"

namespace nlocal {

int qubit_count(Eigen::Index dim) {
    if (dim <= 0 || (dim & (dim - 1)) != 0) {
        throw InvalidArgument("dimension " + std::to_string(dim) + " is not a power of two");
    }
    int k = 0;
    while ((Eigen::Index{1} << k) < dim) ++k;
    return k;
}

ComplexVector tensor_product(const ComplexVector& a, const ComplexVector& b) {
    if (a.size() == 0 || b.size() == 0) throw InvalidArgument("tensor_product: empty operand");
    ComplexVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.size() == 0 || b.size() == 0) throw InvalidArgument("tensor_product: empty operand");
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexVector tensor_product(std::span<const ComplexVector> factors) {
    if (factors.empty()) throw InvalidArgument("tensor_product: no factors");
    ComplexVector out = factors[0];
    for (std::size_t k = 1; k < factors.size(); ++k) out = tensor_product(out, factors[k]);
    return out;
}

ComplexMatrix tensor_product(std::span<const ComplexMatrix> factors) {
    if (factors.empty()) throw InvalidArgument("tensor_product: no factors");
    ComplexMatrix out = factors[0];
    for (std::size_t k = 1; k < factors.size(); ++k) out = tensor_product(out, factors[k]);
    return out;
}

ComplexMatrix conjugate_transpose(const ComplexMatrix& m) { return m.adjoint(); }

ComplexMatrix projector(const ComplexVector& v) {
    if (!is_normalized(v)) throw InvalidArgument("projector: vector is not normalized");
    return v * v.adjoint();
}

Complex expectation(const ComplexMatrix& rho, const ComplexMatrix& op) {
    if (rho.rows() != rho.cols() || op.rows() != op.cols() || rho.rows() != op.rows()) {
        throw InvalidArgument("expectation: dimension mismatch");
    }
    // Tr(AB) = sum_ij A_ij B_ji without forming the product.
    return (rho.array() * op.transpose().array()).sum();
}

ComplexMatrix density(const ComplexVector& ket) { return ket * ket.adjoint(); }

namespace {

// Maps an output index to the input index under a qubit permutation.
std::vector<Eigen::Index> permutation_table(int k, std::span<const int> order) {
    if (static_cast<int>(order.size()) != k) {
        throw InvalidArgument("permute_qubits: order length does not match register");
    }
    std::vector<bool> seen(k, false);
    for (int q : order) {
        if (q < 0 || q >= k || seen[q]) throw InvalidArgument("permute_qubits: order is not a permutation");
        seen[q] = true;
    }
    const Eigen::Index dim = Eigen::Index{1} << k;
    std::vector<Eigen::Index> table(dim);
    for (Eigen::Index out = 0; out < dim; ++out) {
        Eigen::Index in = 0;
        for (int pos = 0; pos < k; ++pos) {
            const Eigen::Index bit = (out >> (k - 1 - pos)) & 1;
            in |= bit << (k - 1 - order[pos]);
        }
        table[out] = in;
    }
    return table;
}

}  // namespace

ComplexVector permute_qubits(const ComplexVector& ket, std::span<const int> order) {
    const auto table = permutation_table(qubit_count(ket.size()), order);
    ComplexVector out(ket.size());
    for (Eigen::Index i = 0; i < ket.size(); ++i) out(i) = ket(table[i]);
    return out;
}

ComplexMatrix permute_qubits(const ComplexMatrix& rho, std::span<const int> order) {
    if (rho.rows() != rho.cols()) throw InvalidArgument("permute_qubits: matrix is not square");
    const auto table = permutation_table(qubit_count(rho.rows()), order);
    ComplexMatrix out(rho.rows(), rho.cols());
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
        for (Eigen::Index j = 0; j < rho.cols(); ++j) out(i, j) = rho(table[i], table[j]);
    }
    return out;
}

namespace pauli {
Matrix2c identity() { return Matrix2c::Identity(); }
Matrix2c x() {
    Matrix2c m;
    m << 0, 1, 1, 0;
    return m;
}
Matrix2c y() {
    Matrix2c m;
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}
Matrix2c z() {
    Matrix2c m;
    m << 1, 0, 0, -1;
    return m;
}
Matrix2c hadamard() {
    Matrix2c m;
    m << 1, 1, 1, -1;
    return m / std::sqrt(2.0);
}
}  // namespace pauli

bool is_normalized(const ComplexVector& v, double tol) { return std::abs(v.norm() - 1.0) <= tol; }

bool is_hermitian(const ComplexMatrix& m, double tol) {
    return m.rows() == m.cols() && max_abs_diff(m, m.adjoint()) <= tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return max_abs_diff(m.adjoint() * m, ComplexMatrix::Identity(m.rows(), m.cols())) <= tol;
}

bool is_projector(const ComplexMatrix& m, double tol) {
    return is_hermitian(m, tol) && max_abs_diff(m * m, m) <= tol;
}

bool is_density_matrix(const ComplexMatrix& m, double tol) {
    if (!is_hermitian(m, tol)) return false;
    if (std::abs(m.trace() - Complex(1.0, 0.0)) > tol) return false;
    return hermitian_eigenvalues(m).minCoeff() > -tol;
}

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return std::numeric_limits<double>::infinity();
    if (a.size() == 0) return 0.0;
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace nlocal
