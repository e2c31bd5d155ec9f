#pragma once

// Projective measurements with bit-string outcome labels.

#include <span>
#include <string>
#include <vector>

#include "nlocal/linalg.hpp"

namespace nlocal {

// Unit Bloch direction (sin t cos p, sin t sin p, cos t).
struct Direction {
    double theta = 0.0;
    double phi = 0.0;

    Eigen::Vector3d bloch() const;
    // n.sigma, eigenvalue +1 on label 0.
    Matrix2c observable() const;
};

// A complete family of rank-one projectors. Outcome k is labelled by
// `labels[k]`, an `arity`-bit string packed with its first bit most
// significant.
struct LabeledBasis {
    std::vector<ComplexVector> vectors;
    std::vector<ComplexMatrix> projectors;
    std::vector<unsigned> labels;
    int arity = 0;

    std::size_t size() const { return vectors.size(); }
    // Index of the outcome carrying `label`.
    std::size_t index_of(unsigned label) const;
    std::string label_string(std::size_t k) const;
};

LabeledBasis qubit_basis(const Direction& d);

// phi+ -> 00, phi- -> 01, psi+ -> 10, psi- -> 11.
LabeledBasis bell_basis();

// |phi_{m n1 ... n_{k-1}}> = (1/sqrt2) sum_r (-1)^{m r} |r, r^n1, ..., r^n_{k-1}>,
// labelled (m, n1, ..., n_{k-1}). 2 <= n <= 4.
LabeledBasis ghz_basis(int n);

// Conjugates every projector by U_1 (x) ... (x) U_arity.
LabeledBasis rotate_basis(const LabeledBasis& b, std::span<const Matrix2c> locals);

// Largest deviation from completeness (sum = I) and pairwise
// orthogonality, and from each projector being rank-one idempotent.
double basis_defect(const LabeledBasis& b);

}  // namespace nlocal
