#pragma once

#include <span>
#include <vector>

#include "goefluct/ensemble.hpp"
#include "goefluct/test_function.hpp"

namespace goefluct {

// Eigen-decomposition with descending eigenvalues and orthonormal
// eigenvectors stored column-major (column i pairs with eigenvalues[i]).
// Sign convention: the first nonzero component of each column is positive.
struct SpectralDecomposition {
    int n = 0;
    std::vector<double> eigenvalues;    // descending
    std::vector<double> eigenvectors;   // column-major n x n
    double input_norm = 0.0;            // max-abs entry of the input matrix

    double vec(int row, int col) const {
        return eigenvectors[static_cast<std::size_t>(col) * n + row];
    }

    // Gap tolerance below which eigenvalues are treated as degenerate.
    double degeneracy_tolerance() const;
};

// Householder tridiagonalization followed by implicit-shift QL, budget
// 30 n sweeps in total. Derivative formulas are only valid away from
// repeated eigenvalues; the decomposition itself never refuses.
SpectralDecomposition eigen_decompose(const PackedSymmetric& m);

// Same reduction without accumulating eigenvectors (descending order).
std::vector<double> eigenvalues_only(const PackedSymmetric& m);

// sum_i f(lambda_i) = n * integral of f against the empirical spectral
// distribution.
double linear_statistic(std::span<const double> eigenvalues,
                        const TestFunction& f);
double linear_statistic(const SpectralDecomposition& d, const TestFunction& f);

// Eigenvector coupling vector over packed coordinates:
//   V^{i,j}_{k,h} = U_{k,i} U_{h,j} + U_{h,i} U_{k,j}   (k < h)
//   V^{i,j}_{k,k} = sqrt(2) U_{k,i} U_{k,j}
std::vector<double> v_coupling(const SpectralDecomposition& d, int i, int j);

// First derivatives of the i-th eigenvalue over the packed coordinates
// (= V^{i,i}); requires the gaps to the neighboring eigenvalues to exceed
// the degeneracy tolerance.
std::vector<double> grad_eigenvalue(const SpectralDecomposition& d, int i);

// Derivatives with respect to the raw matrix entries instead of the packed
// coordinates: identical off the diagonal, diagonal divided by sqrt(2).
std::vector<double> grad_eigenvalue_matrix_entries(
    const SpectralDecomposition& d, int i);

// Second derivatives, flattened d(n) x d(n) row-major:
//   H[a][b] = sum_{j != i} 2 / (lambda_i - lambda_j) V^{i,j}_a V^{i,j}_b.
// Refuses (degenerate_spectrum_error) when any gap from lambda_i is below
// tolerance, rather than returning blown-up values.
std::vector<double> hess_eigenvalue(const SpectralDecomposition& d, int i);

// The spectral functionals built from f and the eigenvalue derivatives:
//   psi1[a]    = sum_i f(lambda_i) dlambda_i/dx_a
//   psi2[a][b] = sum_i f(lambda_i) (dlambda_i/dx_a)(dlambda_i/dx_b)
//   pi[a][b]   = sum_{i != j} divided-difference of f at (lambda_i,
//                lambda_j) times V^{i,j}_a V^{i,j}_b
struct SpectralFunctionals {
    std::vector<double> psi1;  // d(n)
    std::vector<double> psi2;  // d(n) x d(n) row-major
    std::vector<double> pi;    // d(n) x d(n) row-major
};

SpectralFunctionals psi_pi_functionals(const SpectralDecomposition& d,
                                       const TestFunction& f);

}  // namespace goefluct
