#pragma once

// State families used as network sources.

#include <array>
#include <random>
#include <string>
#include <string_view>

#include "nlocal/linalg.hpp"

namespace nlocal {

// Bipartition of a three-qubit register: which pair carries the
// entanglement and which qubit factors out.
enum class Cut { k12_3, k13_2, k23_1 };

std::string to_string(Cut cut);
Cut parse_cut(std::string_view text);

struct BisepParams {
    Cut cut = Cut::k12_3;
    double c0 = 1.0;  // Schmidt coefficient of the entangled pair
    double v0 = 1.0;  // |0> amplitude of the product qubit
};

struct CorrelationTensor {
    Eigen::Matrix3d t;
    std::array<double, 3> lambdas;  // singular values, descending
};

// gamma0|00> + sqrt(1 - gamma0^2)|11>.
ComplexVector pure_schmidt(double gamma0);

// cos(beta)|000> + sin(beta)|111>, beta in [0, pi/4].
ComplexVector gghz(double beta);

// cos w2 sin w1 |001> + sin w2 sin w1 |010> + cos w1 |100>. The angles are
// not range-checked.
ComplexVector w_state(double omega1, double omega2);

ComplexVector biseparable(const BisepParams& p);

// Product of three single-qubit kets (a0|0> + a1|1>), qubit 1 first.
ComplexVector product3(const std::array<std::array<Complex, 2>, 3>& amplitudes);

// (|0...0> + |1...1>)/sqrt(2) over n qubits, 2 <= n <= 4.
ComplexVector nghz(int n);

// alpha|000> + sqrt((1 - alpha^2)/3) (|011> + |101> + |110>). Genuinely
// entangled for 0 < alpha < 1.
ComplexVector even_symmetric(double alpha);

// v|psi-><psi-| + (1 - v) I/4.
ComplexMatrix werner(double v);

// Bell states in the computational basis.
ComplexVector phi_plus();
ComplexVector phi_minus();
ComplexVector psi_plus();
ComplexVector psi_minus();

// t_ij = Tr[rho sigma_i (x) sigma_j], i, j in {x, y, z}.
CorrelationTensor correlation_tensor(const ComplexMatrix& rho);

// Normalized G G^dagger with G a 4x4 matrix of standard complex Gaussians.
ComplexMatrix random_density_matrix(std::mt19937_64& rng, int dim = 4);

// Haar-distributed single-qubit unitary.
Matrix2c random_unitary2(std::mt19937_64& rng);

// Uniformly random single-qubit ket.
std::array<Complex, 2> random_qubit(std::mt19937_64& rng);

}  // namespace nlocal
