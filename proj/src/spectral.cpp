#include "goefluct/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "goefluct/errors.hpp"
#include "goefluct/kernels/kernels.hpp"

namespace goefluct {
namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Householder reduction of a dense symmetric matrix (row-major, lower
// triangle authoritative) to tridiagonal form. On return d holds the
// diagonal and e[1..n-1] the subdiagonal (e[0] = 0). When z is non-null it
// receives the accumulated orthogonal factor Q with A = Q T Q^T, stored
// column-major.
void tridiagonalize(std::vector<double>& a, int n, std::vector<double>& d,
                    std::vector<double>& e, std::vector<double>* z) {
    const auto& ops = kernels::active();
    auto row = [&](int i) { return a.data() + static_cast<std::size_t>(i) * n; };

    std::vector<double> hcoef(n, 0.0);
    std::vector<double> p(n), q(n);
    // Householder vectors are stashed in the reduced rows of a.
    for (int i = n - 1; i >= 1; --i) {
        double scale = 0.0;
        for (int k = 0; k < i; ++k) scale += std::fabs(row(i)[k]);
        if (i == 1 || scale == 0.0) {
            e[i] = row(i)[i - 1];
            continue;
        }
        double* u = row(i);
        double sig = 0.0;
        for (int k = 0; k < i; ++k) {
            u[k] /= scale;
            sig += u[k] * u[k];
        }
        const double f = u[i - 1];
        const double g = f >= 0.0 ? -std::sqrt(sig) : std::sqrt(sig);
        e[i] = scale * g;
        const double h = sig - f * g;
        u[i - 1] = f - g;
        hcoef[i] = h;

        // p = A u restricted to the leading i x i block, via the lower
        // triangle: row dots for k <= j, then transposed contributions.
        for (int j = 0; j < i; ++j) {
            p[j] = ops.dot(row(j), u, static_cast<std::size_t>(j) + 1);
        }
        for (int k = 1; k < i; ++k) {
            ops.axpy(u[k], row(k), p.data(), static_cast<std::size_t>(k));
        }
        for (int j = 0; j < i; ++j) p[j] /= h;
        const double kk =
            ops.dot(u, p.data(), static_cast<std::size_t>(i)) / (2.0 * h);
        for (int j = 0; j < i; ++j) q[j] = p[j] - kk * u[j];
        // A -= u q^T + q u^T on the leading block.
        for (int j = 0; j < i; ++j) {
            ops.rank2_update(row(j), u[j], q.data(), q[j], u,
                             static_cast<std::size_t>(j) + 1);
        }
    }
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) d[i] = row(i)[i];

    if (z != nullptr) {
        auto col = [&](int j) {
            return z->data() + static_cast<std::size_t>(j) * n;
        };
        z->assign(static_cast<std::size_t>(n) * n, 0.0);
        for (int j = 0; j < n; ++j) col(j)[j] = 1.0;
        // Q = P_{n-1} ... P_1 applied to the identity, left to right.
        for (int i = 1; i < n; ++i) {
            if (hcoef[i] == 0.0) continue;
            const double* u = row(i);
            for (int j = 0; j < i; ++j) {
                const double gj =
                    ops.dot(u, col(j), static_cast<std::size_t>(i)) / hcoef[i];
                ops.axpy(-gj, u, col(j), static_cast<std::size_t>(i));
            }
        }
    }
}

// Implicit-shift QL on a tridiagonal (d, e); z, when non-null, is the
// column-major orthogonal accumulator whose columns become eigenvectors.
// Total sweep budget 30 n.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, int n,
                 std::vector<double>* z) {
    const auto& ops = kernels::active();
    const double eps = std::numeric_limits<double>::epsilon();
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    int sweeps = 0;
    const int budget = 30 * n;
    for (int l = 0; l < n; ++l) {
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (++sweeps > budget) {
                    throw convergence_error(
                        "QL iteration exceeded its sweep budget");
                }
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::fabs(r) : -std::fabs(r)));
                double s = 1.0, c = 1.0, pshift = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= pshift;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - pshift;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    pshift = s * r;
                    d[i + 1] = g + pshift;
                    g = c * r - b;
                    if (z != nullptr) {
                        double* coli = z->data() + static_cast<std::size_t>(i) * n;
                        double* coli1 = z->data() + static_cast<std::size_t>(i + 1) * n;
                        ops.rot(coli1, coli, c, s, static_cast<std::size_t>(n));
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= pshift;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

void solve(const PackedSymmetric& mat, std::vector<double>& eigs,
           std::vector<double>* z) {
    const int n = mat.n;
    std::vector<double> a = mat.to_dense();
    std::vector<double> d(n), e(n, 0.0);
    if (n == 1) {
        d[0] = a[0];
        if (z) *z = {1.0};
    } else {
        tridiagonalize(a, n, d, e, z);
        ql_implicit(d, e, n, z);
    }

    // Descending order, then the sign convention.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return d[x] > d[y]; });
    eigs.resize(n);
    for (int i = 0; i < n; ++i) eigs[i] = d[order[i]];
    if (z != nullptr) {
        std::vector<double> sorted(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i) {
            const double* src = z->data() + static_cast<std::size_t>(order[i]) * n;
            double* dst = sorted.data() + static_cast<std::size_t>(i) * n;
            double flip = 1.0;
            for (int k = 0; k < n; ++k) {
                if (src[k] != 0.0) {
                    flip = src[k] > 0.0 ? 1.0 : -1.0;
                    break;
                }
            }
            for (int k = 0; k < n; ++k) dst[k] = flip * src[k];
        }
        *z = std::move(sorted);
    }
}

double require_simple_at(const SpectralDecomposition& d, int i) {
    const double tol = d.degeneracy_tolerance();
    const int n = d.n;
    if (i < 0 || i >= n) throw std::out_of_range("eigenvalue index");
    if ((i > 0 && d.eigenvalues[i - 1] - d.eigenvalues[i] <= tol) ||
        (i + 1 < n && d.eigenvalues[i] - d.eigenvalues[i + 1] <= tol)) {
        throw degenerate_spectrum_error(
            "eigenvalue gap below degeneracy tolerance");
    }
    return tol;
}

}  // namespace

double SpectralDecomposition::degeneracy_tolerance() const {
    return 1e-10 * input_norm;
}

SpectralDecomposition eigen_decompose(const PackedSymmetric& m) {
    for (double c : m.coeffs) {
        if (!std::isfinite(c)) {
            throw std::invalid_argument("eigen_decompose: non-finite entry");
        }
    }
    SpectralDecomposition out;
    out.n = m.n;
    out.input_norm = m.max_abs_entry();
    solve(m, out.eigenvalues, &out.eigenvectors);
    return out;
}

std::vector<double> eigenvalues_only(const PackedSymmetric& m) {
    std::vector<double> eigs;
    solve(m, eigs, nullptr);
    return eigs;
}

double linear_statistic(std::span<const double> eigenvalues,
                        const TestFunction& f) {
    double acc = 0.0;
    for (double lambda : eigenvalues) acc += f(lambda);
    return acc;
}

double linear_statistic(const SpectralDecomposition& d, const TestFunction& f) {
    return linear_statistic(std::span<const double>(d.eigenvalues), f);
}

std::vector<double> v_coupling(const SpectralDecomposition& d, int i, int j) {
    const int n = d.n;
    std::vector<double> v(PackedSymmetric::packed_dim(n));
    int a = 0;
    for (int k = 0; k < n; ++k) {
        for (int h = k; h < n; ++h, ++a) {
            v[a] = (k == h)
                       ? kSqrt2 * d.vec(k, i) * d.vec(k, j)
                       : d.vec(k, i) * d.vec(h, j) + d.vec(h, i) * d.vec(k, j);
        }
    }
    return v;
}

std::vector<double> grad_eigenvalue(const SpectralDecomposition& d, int i) {
    require_simple_at(d, i);
    return v_coupling(d, i, i);
}

std::vector<double> grad_eigenvalue_matrix_entries(
    const SpectralDecomposition& d, int i) {
    std::vector<double> g = grad_eigenvalue(d, i);
    int a = 0;
    for (int k = 0; k < d.n; ++k) {
        g[a] /= kSqrt2;  // diagonal packed slot of row k
        a += d.n - k;
    }
    return g;
}

std::vector<double> hess_eigenvalue(const SpectralDecomposition& d, int i) {
    const double tol = d.degeneracy_tolerance();
    const int n = d.n;
    if (i < 0 || i >= n) throw std::out_of_range("eigenvalue index");
    for (int j = 0; j < n; ++j) {
        if (j != i && std::fabs(d.eigenvalues[i] - d.eigenvalues[j]) <= tol) {
            throw degenerate_spectrum_error(
                "eigenvalue gap below degeneracy tolerance");
        }
    }
    const int dim = PackedSymmetric::packed_dim(n);
    std::vector<double> hess(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const std::vector<double> v = v_coupling(d, i, j);
        const double w = 2.0 / (d.eigenvalues[i] - d.eigenvalues[j]);
        for (int a = 0; a < dim; ++a) {
            const double va = w * v[a];
            for (int b = 0; b < dim; ++b) {
                hess[static_cast<std::size_t>(a) * dim + b] += va * v[b];
            }
        }
    }
    return hess;
}

SpectralFunctionals psi_pi_functionals(const SpectralDecomposition& d,
                                       const TestFunction& f) {
    const int n = d.n;
    const double tol = d.degeneracy_tolerance();
    for (int i = 0; i + 1 < n; ++i) {
        if (d.eigenvalues[i] - d.eigenvalues[i + 1] <= tol) {
            throw degenerate_spectrum_error(
                "eigenvalue gap below degeneracy tolerance");
        }
    }
    const int dim = PackedSymmetric::packed_dim(n);
    SpectralFunctionals out;
    out.psi1.assign(dim, 0.0);
    out.psi2.assign(static_cast<std::size_t>(dim) * dim, 0.0);
    out.pi.assign(static_cast<std::size_t>(dim) * dim, 0.0);

    std::vector<double> fvals(n);
    for (int i = 0; i < n; ++i) fvals[i] = f(d.eigenvalues[i]);

    for (int i = 0; i < n; ++i) {
        const std::vector<double> g = v_coupling(d, i, i);
        for (int a = 0; a < dim; ++a) {
            out.psi1[a] += fvals[i] * g[a];
            const double fga = fvals[i] * g[a];
            for (int b = 0; b < dim; ++b) {
                out.psi2[static_cast<std::size_t>(a) * dim + b] += fga * g[b];
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dd = (fvals[i] - fvals[j]) /
                              (d.eigenvalues[i] - d.eigenvalues[j]);
            const std::vector<double> v = v_coupling(d, i, j);
            for (int a = 0; a < dim; ++a) {
                const double va = dd * v[a];
                for (int b = 0; b < dim; ++b) {
                    out.pi[static_cast<std::size_t>(a) * dim + b] += va * v[b];
                }
            }
        }
    }
    return out;
}

}  // namespace goefluct
