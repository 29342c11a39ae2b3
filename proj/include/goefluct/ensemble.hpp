#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "goefluct/covariance.hpp"

namespace goefluct {

// n x n real symmetric matrix stored as the d(n) = n(n+1)/2 packed
// coordinates x: row-major upper triangle, with the matrix diagonal equal
// to sqrt(2) times the stored coordinate. All eigenvalue-derivative
// formulas are taken with respect to these coordinates.
struct PackedSymmetric {
    int n = 0;
    std::vector<double> coeffs;  // length d(n)

    PackedSymmetric() = default;
    explicit PackedSymmetric(int dim);

    static int packed_dim(int n) { return n * (n + 1) / 2; }

    // Packed index of (i,j), 0-based, i <= j.
    static int index(int n, int i, int j) {
        return i * n - i * (i + 1) / 2 + j;
    }

    double& at(int i, int j) { return coeffs[index(n, i, j)]; }
    double at(int i, int j) const { return coeffs[index(n, i, j)]; }

    // Realized matrix entry (diagonal carries the sqrt(2) factor).
    double entry(int i, int j) const;

    std::vector<double> to_dense() const;  // row-major n x n
    static PackedSymmetric from_dense(int n, const std::vector<double>& dense);

    double max_abs_entry() const;
};

// One sampled path of the matrix process: a matrix per grid time.
struct GoePath {
    int n = 0;
    TimeGrid grid;
    std::vector<PackedSymmetric> matrices;  // per grid time
    std::uint64_t seed = 0;
    std::uint64_t replica = 0;
    std::string model;
};

// Samples the symmetric matrix process with i.i.d. entry processes of
// covariance R: entry (i,j), i<j equals X_{i,j}(t)/sqrt(n) and the diagonal
// equals sqrt(2) X_{i,i}(t)/sqrt(n). Joint sampling across the grid uses a
// shared Gram Cholesky factor; every entry process has its own counter
// stream keyed by (seed, replica, packed index), so output is a
// deterministic function of the arguments and replicas are independent.
GoePath sample_goe_path(const CovarianceModel& model, int n,
                        const TimeGrid& grid, std::uint64_t seed,
                        std::uint64_t replica = 0);

// Same, reusing a precomputed factor (must match the grid).
GoePath sample_goe_path(const CovarianceModel& model, int n,
                        const GramFactor& factor, std::uint64_t seed,
                        std::uint64_t replica = 0);

// Single-time standard GOE: off-diagonal variance 1/n, diagonal 2/n.
PackedSymmetric sample_standard_goe(int n, std::uint64_t seed,
                                    std::uint64_t replica = 0);

// (A, z A + sqrt(1-z^2) B) with A, B independent standard GOE; both
// marginals standard GOE, entrywise correlation z in [0,1].
std::pair<PackedSymmetric, PackedSymmetric> sample_correlated_goe_pair(
    int n, double z, std::uint64_t seed, std::uint64_t replica = 0);

// Debugging dump: header {n, |grid|, seed} then grid times and the packed
// coefficients per time, all little-endian 64-bit. Not a stable format.
void dump_goe_path(const GoePath& path, std::ostream& os);
GoePath read_goe_path(std::istream& is);

}  // namespace goefluct
