#include "goefluct/kernels/kernels.hpp"
#include "goefluct/rng.hpp"

namespace goefluct::kernels {
namespace {

// Reference implementations. Reduction layout (4 stripes, fixed combine
// order) is the contract every SIMD variant reproduces bit for bit.

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    const std::size_t n4 = n - (n % 4);
    for (std::size_t i = 0; i < n4; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    double s = (s0 + s1) + (s2 + s3);
    for (std::size_t i = n4; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void rank2_scalar(double* row, double f, const double* u, double g,
                  const double* w, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        row[i] = (row[i] - f * u[i]) - g * w[i];
    }
}

void rot_scalar(double* a, double* b, double c, double s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double h = a[i];
        a[i] = s * b[i] + c * h;
        b[i] = c * b[i] - s * h;
    }
}

void kernel_closed_scalar(const double* z, const double* x, const double* y,
                          double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double zz = z[i] * z[i];
        const double omz2 = 1.0 - zz;
        const double d = x[i] - y[i];
        const double t1 = zz * (d * d);
        const double omz = 1.0 - z[i];
        const double t2 = (x[i] * y[i] * z[i]) * (omz * omz);
        const double t3 = omz2 * omz2;
        out[i] = omz2 / ((t1 - t2) + t3);
    }
}

void cheb_step_scalar(const double* x, const double* ucur, double* uprev,
                      std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) uprev[i] = x[i] * ucur[i] - uprev[i];
}

void normal_fill_scalar(std::uint64_t key, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = rng::normal_quantile(
            rng::uniform_from_bits(rng::counter_u64(key, i)));
    }
}

constexpr Ops kScalar = {
    "scalar",        dot_scalar,       axpy_scalar,     rank2_scalar,
    rot_scalar,      kernel_closed_scalar, cheb_step_scalar, normal_fill_scalar,
};

}  // namespace

const Ops& scalar_ops() { return kScalar; }

}  // namespace goefluct::kernels
