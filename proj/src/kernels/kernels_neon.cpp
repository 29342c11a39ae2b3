// NEON variants for the elementwise kernels (two 2-lane registers per
// 4-element step, so the stripe layout matches the scalar reference).
// normal_fill stays on the scalar path: its cost is the branchy quantile,
// which NEON does not help with.

#include "goefluct/kernels/kernels.hpp"
#include "goefluct/rng.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

namespace goefluct::kernels {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
    const std::size_t n4 = n - (n % 4);
    float64x2_t acc01 = vdupq_n_f64(0.0);
    float64x2_t acc23 = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < n4; i += 4) {
        acc01 = vaddq_f64(acc01, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
        acc23 = vaddq_f64(acc23,
                          vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
    }
    double s = (vgetq_lane_f64(acc01, 0) + vgetq_lane_f64(acc01, 1)) +
               (vgetq_lane_f64(acc23, 0) + vgetq_lane_f64(acc23, 1));
    for (std::size_t i = n4; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
    const std::size_t n2 = n - (n % 2);
    const float64x2_t va = vdupq_n_f64(alpha);
    for (std::size_t i = 0; i < n2; i += 2) {
        vst1q_f64(y + i,
                  vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
    }
    for (std::size_t i = n2; i < n; ++i) y[i] += alpha * x[i];
}

void rank2_neon(double* row, double f, const double* u, double g,
                const double* w, std::size_t n) {
    const std::size_t n2 = n - (n % 2);
    const float64x2_t vf = vdupq_n_f64(f);
    const float64x2_t vg = vdupq_n_f64(g);
    for (std::size_t i = 0; i < n2; i += 2) {
        float64x2_t vr = vld1q_f64(row + i);
        vr = vsubq_f64(vr, vmulq_f64(vf, vld1q_f64(u + i)));
        vr = vsubq_f64(vr, vmulq_f64(vg, vld1q_f64(w + i)));
        vst1q_f64(row + i, vr);
    }
    for (std::size_t i = n2; i < n; ++i) {
        row[i] = (row[i] - f * u[i]) - g * w[i];
    }
}

void rot_neon(double* a, double* b, double c, double s, std::size_t n) {
    const std::size_t n2 = n - (n % 2);
    const float64x2_t vc = vdupq_n_f64(c);
    const float64x2_t vs = vdupq_n_f64(s);
    for (std::size_t i = 0; i < n2; i += 2) {
        const float64x2_t h = vld1q_f64(a + i);
        const float64x2_t vb = vld1q_f64(b + i);
        vst1q_f64(a + i, vaddq_f64(vmulq_f64(vs, vb), vmulq_f64(vc, h)));
        vst1q_f64(b + i, vsubq_f64(vmulq_f64(vc, vb), vmulq_f64(vs, h)));
    }
    for (std::size_t i = n2; i < n; ++i) {
        const double h = a[i];
        a[i] = s * b[i] + c * h;
        b[i] = c * b[i] - s * h;
    }
}

void kernel_closed_neon(const double* z, const double* x, const double* y,
                        double* out, std::size_t n) {
    const std::size_t n2 = n - (n % 2);
    const float64x2_t one = vdupq_n_f64(1.0);
    for (std::size_t i = 0; i < n2; i += 2) {
        const float64x2_t vz = vld1q_f64(z + i);
        const float64x2_t vx = vld1q_f64(x + i);
        const float64x2_t vy = vld1q_f64(y + i);
        const float64x2_t zz = vmulq_f64(vz, vz);
        const float64x2_t omz2 = vsubq_f64(one, zz);
        const float64x2_t d = vsubq_f64(vx, vy);
        const float64x2_t t1 = vmulq_f64(zz, vmulq_f64(d, d));
        const float64x2_t omz = vsubq_f64(one, vz);
        const float64x2_t t2 =
            vmulq_f64(vmulq_f64(vmulq_f64(vx, vy), vz), vmulq_f64(omz, omz));
        const float64x2_t t3 = vmulq_f64(omz2, omz2);
        const float64x2_t den = vaddq_f64(vsubq_f64(t1, t2), t3);
        vst1q_f64(out + i, vdivq_f64(omz2, den));
    }
    if (n2 < n) {
        scalar_ops().kernel_closed_batch(z + n2, x + n2, y + n2, out + n2,
                                         n - n2);
    }
}

void cheb_step_neon(const double* x, const double* ucur, double* uprev,
                    std::size_t n) {
    const std::size_t n2 = n - (n % 2);
    for (std::size_t i = 0; i < n2; i += 2) {
        vst1q_f64(uprev + i, vsubq_f64(vmulq_f64(vld1q_f64(x + i),
                                                 vld1q_f64(ucur + i)),
                                       vld1q_f64(uprev + i)));
    }
    for (std::size_t i = n2; i < n; ++i) uprev[i] = x[i] * ucur[i] - uprev[i];
}

void normal_fill_neon(std::uint64_t key, double* out, std::size_t n) {
    scalar_ops().normal_fill(key, out, n);
}

constexpr Ops kNeon = {
    "neon",    dot_neon,           axpy_neon,      rank2_neon,
    rot_neon,  kernel_closed_neon, cheb_step_neon, normal_fill_neon,
};

}  // namespace

const Ops* neon_ops() { return &kNeon; }

}  // namespace goefluct::kernels

#else

namespace goefluct::kernels {
const Ops* neon_ops() { return nullptr; }
}  // namespace goefluct::kernels

#endif
