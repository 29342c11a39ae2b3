#include "goefluct/ensemble.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include "goefluct/kernels/kernels.hpp"
#include "goefluct/rng.hpp"

namespace goefluct {
namespace {

constexpr double kSqrt2 = 1.4142135623730951;

void require_dim(int n) {
    if (n < 1) throw std::invalid_argument("matrix dimension must be >= 1");
}

}  // namespace

PackedSymmetric::PackedSymmetric(int dim) : n(dim) {
    require_dim(dim);
    coeffs.assign(packed_dim(dim), 0.0);
}

double PackedSymmetric::entry(int i, int j) const {
    if (i > j) std::swap(i, j);
    const double x = coeffs[index(n, i, j)];
    return i == j ? kSqrt2 * x : x;
}

std::vector<double> PackedSymmetric::to_dense() const {
    std::vector<double> dense(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double v = entry(i, j);
            dense[static_cast<std::size_t>(i) * n + j] = v;
            dense[static_cast<std::size_t>(j) * n + i] = v;
        }
    }
    return dense;
}

PackedSymmetric PackedSymmetric::from_dense(int n,
                                            const std::vector<double>& dense) {
    require_dim(n);
    if (dense.size() != static_cast<std::size_t>(n) * n) {
        throw std::invalid_argument("from_dense: size mismatch");
    }
    PackedSymmetric p(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double v = dense[static_cast<std::size_t>(i) * n + j];
            p.at(i, j) = (i == j) ? v / kSqrt2 : v;
        }
    }
    return p;
}

double PackedSymmetric::max_abs_entry() const {
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) m = std::max(m, std::fabs(entry(i, j)));
    }
    return m;
}

GoePath sample_goe_path(const CovarianceModel& model, int n,
                        const TimeGrid& grid, std::uint64_t seed,
                        std::uint64_t replica) {
    return sample_goe_path(model, n, gram_factor(model, grid), seed, replica);
}

GoePath sample_goe_path(const CovarianceModel& model, int n,
                        const GramFactor& factor, std::uint64_t seed,
                        std::uint64_t replica) {
    require_dim(n);
    const std::size_t m = factor.size();
    const int d = PackedSymmetric::packed_dim(n);
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

    GoePath path{n, factor.grid, {}, seed, replica, model.describe()};
    path.matrices.assign(m, PackedSymmetric(n));

    std::vector<double> xi(m), values(m);
    const auto& ops = kernels::active();
    for (int e = 0; e < d; ++e) {
        ops.normal_fill(rng::stream_key(seed, replica, static_cast<std::uint64_t>(e)),
                        xi.data(), m);
        factor.apply(xi.data(), values.data());
        for (std::size_t t = 0; t < m; ++t) {
            path.matrices[t].coeffs[e] = values[t] * inv_sqrt_n;
        }
    }
    return path;
}

PackedSymmetric sample_standard_goe(int n, std::uint64_t seed,
                                    std::uint64_t replica) {
    require_dim(n);
    const int d = PackedSymmetric::packed_dim(n);
    PackedSymmetric p(n);
    // Unit-variance driving values at a single time: all packed coordinates
    // are i.i.d. N(0, 1/n).
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    for (int e = 0; e < d; ++e) {
        rng::Stream stream{rng::stream_key(seed, replica, static_cast<std::uint64_t>(e))};
        p.coeffs[e] = stream.next_normal() * inv_sqrt_n;
    }
    return p;
}

std::pair<PackedSymmetric, PackedSymmetric> sample_correlated_goe_pair(
    int n, double z, std::uint64_t seed, std::uint64_t replica) {
    require_dim(n);
    if (!(z >= 0.0 && z <= 1.0)) {
        throw std::invalid_argument("pair correlation must lie in [0,1]");
    }
    const int d = PackedSymmetric::packed_dim(n);
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    const double mix = std::sqrt(1.0 - z * z);
    PackedSymmetric a(n), b(n);
    for (int e = 0; e < d; ++e) {
        // Two draws per entry from one stream: A's normal and the
        // independent component of the second matrix.
        rng::Stream stream{rng::stream_key(seed, replica, static_cast<std::uint64_t>(e))};
        a.coeffs[e] = stream.next_normal() * inv_sqrt_n;
        b.coeffs[e] = z * a.coeffs[e] + mix * (stream.next_normal() * inv_sqrt_n);
    }
    return {std::move(a), std::move(b)};
}

namespace {

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(buf), 8);
}

void put_f64(std::ostream& os, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(os, bits);
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char buf[8];
    is.read(reinterpret_cast<char*>(buf), 8);
    if (!is) throw std::runtime_error("truncated path dump");
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | buf[i];
    return v;
}

double get_f64(std::istream& is) {
    const std::uint64_t bits = get_u64(is);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace

void dump_goe_path(const GoePath& path, std::ostream& os) {
    put_u64(os, static_cast<std::uint64_t>(path.n));
    put_u64(os, path.grid.size());
    put_u64(os, path.seed);
    for (double t : path.grid.times) put_f64(os, t);
    for (const auto& mat : path.matrices) {
        for (double c : mat.coeffs) put_f64(os, c);
    }
}

GoePath read_goe_path(std::istream& is) {
    const int n = static_cast<int>(get_u64(is));
    const std::size_t m = get_u64(is);
    const std::uint64_t seed = get_u64(is);
    std::vector<double> times(m);
    for (auto& t : times) t = get_f64(is);
    GoePath path{n, TimeGrid(std::move(times)), {}, seed, 0, ""};
    path.matrices.assign(m, PackedSymmetric(n));
    for (auto& mat : path.matrices) {
        for (auto& c : mat.coeffs) c = get_f64(is);
    }
    return path;
}

}  // namespace goefluct
