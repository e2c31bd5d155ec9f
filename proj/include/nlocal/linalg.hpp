#pragma once

// Dense complex algebra over qubit registers.
//
// Convention used everywhere in the library: qubit 0 is the most
// significant bit of a computational-basis index, so for a ket over
// qubits (q0, q1, ..., q{k-1}) the amplitude of |b0 b1 ... b{k-1}> sits
// at index b0*2^{k-1} + ... + b{k-1}.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace nlocal {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using Matrix2c = Eigen::Matrix2cd;

inline constexpr double kTolerance = 1e-9;
inline constexpr int kMaxQubits = 16;

// Number of qubits for a power-of-two dimension; throws otherwise.
int qubit_count(Eigen::Index dim);

ComplexVector tensor_product(const ComplexVector& a, const ComplexVector& b);
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector tensor_product(std::span<const ComplexVector> factors);
ComplexMatrix tensor_product(std::span<const ComplexMatrix> factors);

ComplexMatrix conjugate_transpose(const ComplexMatrix& m);

// |v><v| for a unit vector. Throws InvalidArgument if |v| != 1.
ComplexMatrix projector(const ComplexVector& v);

// Tr(rho * op).
Complex expectation(const ComplexMatrix& rho, const ComplexMatrix& op);

ComplexMatrix density(const ComplexVector& ket);

// Reorders the tensor factors of a ket: qubit `order[k]` of the input
// becomes qubit k of the output.
ComplexVector permute_qubits(const ComplexVector& ket, std::span<const int> order);
ComplexMatrix permute_qubits(const ComplexMatrix& rho, std::span<const int> order);

namespace pauli {
Matrix2c identity();
Matrix2c x();
Matrix2c y();
Matrix2c z();
Matrix2c hadamard();
}  // namespace pauli

// Structural checks, all against kTolerance unless noted.
bool is_normalized(const ComplexVector& v, double tol = kTolerance);
bool is_hermitian(const ComplexMatrix& m, double tol = kTolerance);
bool is_unitary(const ComplexMatrix& m, double tol = kTolerance);
bool is_projector(const ComplexMatrix& m, double tol = kTolerance);
bool is_density_matrix(const ComplexMatrix& m, double tol = kTolerance);

// Ascending eigenvalues of a Hermitian matrix.
Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace nlocal
