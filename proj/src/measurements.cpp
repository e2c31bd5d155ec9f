#include "nlocal/measurements.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlocal/error.hpp"

namespace nlocal {

Eigen::Vector3d Direction::bloch() const {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

Matrix2c Direction::observable() const {
    const Eigen::Vector3d n = bloch();
    return n.x() * pauli::x() + n.y() * pauli::y() + n.z() * pauli::z();
}

std::size_t LabeledBasis::index_of(unsigned label) const {
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw InvalidArgument("basis has no outcome with label " + std::to_string(label));
    return static_cast<std::size_t>(it - labels.begin());
}

std::string LabeledBasis::label_string(std::size_t k) const {
    std::string s(arity, '0');
    for (int bit = 0; bit < arity; ++bit) {
        if ((labels[k] >> (arity - 1 - bit)) & 1u) s[bit] = '1';
    }
    return s;
}

namespace {

LabeledBasis from_vectors(std::vector<ComplexVector> vectors, std::vector<unsigned> labels, int arity) {
    LabeledBasis b;
    b.arity = arity;
    b.labels = std::move(labels);
    b.projectors.reserve(vectors.size());
    for (const auto& v : vectors) b.projectors.push_back(v * v.adjoint());
    b.vectors = std::move(vectors);
    return b;
}

}  // namespace

LabeledBasis qubit_basis(const Direction& d) {
    // Eigenvectors of n.sigma: cos(t/2)|0> + e^{ip} sin(t/2)|1> for +1,
    // sin(t/2)|0> - e^{ip} cos(t/2)|1> for -1.
    const double c = std::cos(d.theta / 2);
    const double s = std::sin(d.theta / 2);
    const Complex e = std::polar(1.0, d.phi);
    ComplexVector plus(2), minus(2);
    plus << c, e * s;
    minus << s, -e * c;
    return from_vectors({plus, minus}, {0u, 1u}, 1);
}

LabeledBasis bell_basis() {
    const double h = std::numbers::sqrt2 / 2;
    ComplexVector phi_p(4), phi_m(4), psi_p(4), psi_m(4);
    phi_p << h, 0, 0, h;
    phi_m << h, 0, 0, -h;
    psi_p << 0, h, h, 0;
    psi_m << 0, h, -h, 0;
    return from_vectors({phi_p, phi_m, psi_p, psi_m}, {0b00u, 0b01u, 0b10u, 0b11u}, 2);
}

LabeledBasis ghz_basis(int n) {
    if (n < 2 || n > 4) throw InvalidArgument("ghz_basis: n must lie in [2, 4]");
    const Eigen::Index dim = Eigen::Index{1} << n;
    const unsigned offsets_mask = (1u << (n - 1)) - 1u;
    std::vector<ComplexVector> vectors;
    std::vector<unsigned> labels;
    for (unsigned label = 0; label < static_cast<unsigned>(dim); ++label) {
        const unsigned m = label >> (n - 1);
        const unsigned offsets = label & offsets_mask;
        ComplexVector v = ComplexVector::Zero(dim);
        for (unsigned r = 0; r < 2; ++r) {
            // First qubit r, qubit j (j >= 1) carries r ^ n_j.
            unsigned index = r << (n - 1);
            const unsigned rest = r ? (offsets_mask ^ offsets) : offsets;
            index |= rest;
            v(index) += ((m & r) ? -1.0 : 1.0) / std::numbers::sqrt2;
        }
        vectors.push_back(std::move(v));
        labels.push_back(label);
    }
    return from_vectors(std::move(vectors), std::move(labels), n);
}

LabeledBasis rotate_basis(const LabeledBasis& b, std::span<const Matrix2c> locals) {
    if (static_cast<int>(locals.size()) != b.arity) throw InvalidArgument("rotate_basis: need one unitary per qubit");
    ComplexMatrix u = ComplexMatrix::Identity(1, 1);
    for (const auto& local : locals) {
        if (!is_unitary(local)) throw InvalidArgument("rotate_basis: local operation is not unitary");
        u = tensor_product(u, ComplexMatrix(local));
    }
    std::vector<ComplexVector> vectors;
    vectors.reserve(b.size());
    for (const auto& v : b.vectors) vectors.push_back(u * v);
    return from_vectors(std::move(vectors), b.labels, b.arity);
}

double basis_defect(const LabeledBasis& b) {
    if (b.size() == 0) return std::numeric_limits<double>::infinity();
    const Eigen::Index dim = b.projectors.front().rows();
    if (static_cast<Eigen::Index>(b.size()) != dim) return std::numeric_limits<double>::infinity();
    ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
    double worst = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const auto& p = b.projectors[i];
        sum += p;
        worst = std::max(worst, max_abs_diff(p * p, p));
        worst = std::max(worst, max_abs_diff(p, p.adjoint()));
        worst = std::max(worst, std::abs(p.trace() - Complex(1.0)));
        for (std::size_t j = i + 1; j < b.size(); ++j) {
            worst = std::max(worst, (p * b.projectors[j]).cwiseAbs().maxCoeff());
        }
    }
    worst = std::max(worst, max_abs_diff(sum, ComplexMatrix::Identity(dim, dim)));
    std::vector<unsigned> sorted = b.labels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return std::numeric_limits<double>::infinity();
    return worst;
}

}  // namespace nlocal
