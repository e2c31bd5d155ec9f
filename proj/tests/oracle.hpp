#pragma once

// Reference implementations used as test oracles. Everything here is
// written with explicit index loops and does not call into the library's
// tensor, permutation or contraction code.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "nlocal/distribution.hpp"
#include "nlocal/measurements.hpp"
#include "nlocal/network.hpp"

namespace oracle {

using nlocal::Complex;
using nlocal::ComplexMatrix;
using nlocal::ComplexVector;

inline ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
    ComplexVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        for (Eigen::Index j = 0; j < b.size(); ++j) out(i * b.size() + j) = a(i) * b(j);
    return out;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index k = 0; k < b.rows(); ++k)
                for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

// Bit of qubit q (0 = most significant) in an N-qubit basis index.
inline unsigned bit(std::size_t index, int q, int total) { return (index >> (total - 1 - q)) & 1u; }

// Index of the sub-register formed by `qubits` (first listed = MSB).
inline std::size_t sub_index(std::size_t index, const std::vector<int>& qubits, int total) {
    std::size_t s = 0;
    for (int q : qubits) s = (s << 1) | bit(index, q, total);
    return s;
}

struct Party {
    std::vector<int> qubits;  // joint-register qubits, in the party's own order
};

// Born probability Tr[rho (P_1 (x) ... (x) P_m)] where party p applies the
// projector `ops[p]` to `parties[p].qubits`, by direct summation over
// matrix elements of rho.
inline double born(const ComplexMatrix& rho, const std::vector<Party>& parties, const std::vector<ComplexMatrix>& ops) {
    const int total = static_cast<int>(std::lround(std::log2(static_cast<double>(rho.rows()))));
    Complex acc = 0.0;
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
        for (Eigen::Index j = 0; j < rho.cols(); ++j) {
            if (rho(i, j) == Complex(0.0)) continue;
            Complex proj = 1.0;
            for (std::size_t p = 0; p < parties.size() && proj != Complex(0.0); ++p)
                proj *= ops[p](sub_index(j, parties[p].qubits, total), sub_index(i, parties[p].qubits, total));
            acc += rho(i, j) * proj;
        }
    }
    return acc.real();
}

// Same probability for a pure joint state and rank-one projectors |v_p><v_p|.
inline double born_pure(const ComplexVector& psi, const std::vector<Party>& parties,
                        const std::vector<ComplexVector>& vs) {
    const int total = static_cast<int>(std::lround(std::log2(static_cast<double>(psi.size()))));
    Complex amp = 0.0;
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        Complex term = psi(i);
        for (std::size_t p = 0; p < parties.size() && term != Complex(0.0); ++p)
            term *= std::conj(vs[p](sub_index(i, parties[p].qubits, total)));
        amp += term;
    }
    return std::norm(amp);
}

inline ComplexMatrix outer(const ComplexVector& v) { return v * v.adjoint(); }

inline ComplexMatrix joint_density(const std::vector<ComplexMatrix>& sources) {
    ComplexMatrix rho = sources.front();
    for (std::size_t s = 1; s < sources.size(); ++s) rho = kron(rho, sources[s]);
    return rho;
}

// Full outcome table for a network whose extremes come first in `parties`
// followed by the intermediates, which measure in `bases`. A non-empty `psi`
// takes precedence over `rho`.
inline std::vector<double> table(const ComplexVector& psi, const ComplexMatrix& rho, const std::vector<Party>& parties,
                                 int extremes,
                                 const std::vector<nlocal::LabeledBasis>& bases, const nlocal::ExtremeSettings& s,
                                 const nlocal::DistributionShape& shape) {
    std::vector<double> out(shape.size(), 0.0);
    const int k = static_cast<int>(bases.size());
    for (std::size_t x = 0; x < shape.input_count(); ++x) {
        for (std::size_t a = 0; a < shape.output_count(); ++a) {
            std::vector<ComplexVector> vs;
            for (int e = 0; e < extremes; ++e) {
                const int xe = bit(x, e, extremes), ae = bit(a, e, extremes);
                const auto basis = nlocal::qubit_basis(s[e][xe]);
                vs.push_back(basis.vectors[basis.index_of(ae)]);
            }
            vs.resize(extremes + k);
            // Enumerate every combination of intermediate basis vectors.
            std::vector<std::size_t> pick(k, 0);
            while (true) {
                std::size_t b = 0;
                for (int j = 0; j < k; ++j) {
                    vs[extremes + j] = bases[j].vectors[pick[j]];
                    b = (b << shape.label_bits) | bases[j].labels[pick[j]];
                }
                double p = 0.0;
                if (psi.size() > 0) {
                    p = born_pure(psi, parties, vs);
                } else {
                    std::vector<ComplexMatrix> ops;
                    for (const auto& v : vs) ops.push_back(outer(v));
                    p = born(rho, parties, ops);
                }
                out[(x * shape.output_count() + a) * shape.label_combo_count() + b] = p;
                int j = k - 1;
                while (j >= 0 && ++pick[j] == bases[j].size()) pick[j--] = 0;
                if (j < 0) break;
            }
        }
    }
    return out;
}

// Chain of n two-qubit sources: qubits 2i, 2i+1 belong to source i.
inline std::vector<double> linear_table(const std::vector<ComplexMatrix>& sources, const nlocal::ExtremeSettings& s,
                                        const std::vector<nlocal::LabeledBasis>& bases) {
    const int n = static_cast<int>(sources.size());
    std::vector<Party> parties{{{0}}, {{2 * n - 1}}};
    for (int j = 0; j + 1 < n; ++j) parties.push_back({{2 * j + 1, 2 * j + 2}});
    return table(ComplexVector(), joint_density(sources), parties, 2, bases, s, nlocal::DistributionShape::linear(n));
}

// n sources of n qubits: qubit q (1-based) of source i sits at i*n + q-1.
inline std::vector<double> nonlinear_table(const std::vector<ComplexVector>& sources, const std::vector<int>& arrangement,
                                           const std::vector<std::vector<int>>& routing,
                                           const nlocal::ExtremeSettings& s) {
    const int n = static_cast<int>(sources.size());
    ComplexVector psi = sources.front();
    for (std::size_t i = 1; i < sources.size(); ++i) psi = kron(psi, sources[i]);
    std::vector<Party> parties;
    for (int e = 0; e < n; ++e) parties.push_back({{e * n + arrangement[e] - 1}});
    for (int j = 0; j + 1 < n; ++j) {
        Party p;
        for (int i = 0; i < n; ++i) p.qubits.push_back(i * n + routing[i][j] - 1);
        parties.push_back(p);
    }
    std::vector<nlocal::LabeledBasis> bases(n - 1, nlocal::ghz_basis(n));
    return table(psi, ComplexMatrix(), parties, n, bases, s, nlocal::DistributionShape::nonlinear(n));
}

inline nlocal::ExtremeSettings random_settings(std::mt19937_64& rng, int extremes) {
    std::uniform_real_distribution<double> theta(0.0, std::numbers::pi), phi(0.0, 2 * std::numbers::pi);
    nlocal::ExtremeSettings s(extremes);
    for (auto& pair : s)
        for (auto& d : pair) d = {theta(rng), phi(rng)};
    return s;
}

inline ComplexVector random_ket(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> g;
    ComplexVector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = {g(rng), g(rng)};
    return v / v.norm();
}

inline double max_diff(std::span<const double> a, std::span<const double> b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return a.size() == b.size() ? worst : 1e300;
}

}  // namespace oracle
