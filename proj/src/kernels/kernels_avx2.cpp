// AVX2 variants. Mul and add stay separate instructions (no FMA) so every
// lane reproduces the scalar reference bit for bit; see kernels.hpp.

#include "goefluct/kernels/kernels.hpp"
#include "goefluct/rng.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace goefluct::kernels {
namespace {

double dot_avx2(const double* a, const double* b, std::size_t n) {
    const std::size_t n4 = n - (n % 4);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < n4; i += 4) {
        const __m256d va = _mm256_loadu_pd(a + i);
        const __m256d vb = _mm256_loadu_pd(b + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(va, vb));
    }
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    double s = (lane[0] + lane[1]) + (lane[2] + lane[3]);
    for (std::size_t i = n4; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const std::size_t n4 = n - (n % 4);
    const __m256d va = _mm256_set1_pd(alpha);
    for (std::size_t i = 0; i < n4; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        const __m256d vy = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, vx)));
    }
    for (std::size_t i = n4; i < n; ++i) y[i] += alpha * x[i];
}

void rank2_avx2(double* row, double f, const double* u, double g,
                const double* w, std::size_t n) {
    const std::size_t n4 = n - (n % 4);
    const __m256d vf = _mm256_set1_pd(f);
    const __m256d vg = _mm256_set1_pd(g);
    for (std::size_t i = 0; i < n4; i += 4) {
        __m256d vr = _mm256_loadu_pd(row + i);
        vr = _mm256_sub_pd(vr, _mm256_mul_pd(vf, _mm256_loadu_pd(u + i)));
        vr = _mm256_sub_pd(vr, _mm256_mul_pd(vg, _mm256_loadu_pd(w + i)));
        _mm256_storeu_pd(row + i, vr);
    }
    for (std::size_t i = n4; i < n; ++i) {
        row[i] = (row[i] - f * u[i]) - g * w[i];
    }
}

void rot_avx2(double* a, double* b, double c, double s, std::size_t n) {
    const std::size_t n4 = n - (n % 4);
    const __m256d vc = _mm256_set1_pd(c);
    const __m256d vs = _mm256_set1_pd(s);
    for (std::size_t i = 0; i < n4; i += 4) {
        const __m256d h = _mm256_loadu_pd(a + i);
        const __m256d vb = _mm256_loadu_pd(b + i);
        _mm256_storeu_pd(
            a + i, _mm256_add_pd(_mm256_mul_pd(vs, vb), _mm256_mul_pd(vc, h)));
        _mm256_storeu_pd(
            b + i, _mm256_sub_pd(_mm256_mul_pd(vc, vb), _mm256_mul_pd(vs, h)));
    }
    for (std::size_t i = n4; i < n; ++i) {
        const double h = a[i];
        a[i] = s * b[i] + c * h;
        b[i] = c * b[i] - s * h;
    }
}

void kernel_closed_avx2(const double* z, const double* x, const double* y,
                        double* out, std::size_t n) {
    const std::size_t n4 = n - (n % 4);
    const __m256d one = _mm256_set1_pd(1.0);
    for (std::size_t i = 0; i < n4; i += 4) {
        const __m256d vz = _mm256_loadu_pd(z + i);
        const __m256d vx = _mm256_loadu_pd(x + i);
        const __m256d vy = _mm256_loadu_pd(y + i);
        const __m256d zz = _mm256_mul_pd(vz, vz);
        const __m256d omz2 = _mm256_sub_pd(one, zz);
        const __m256d d = _mm256_sub_pd(vx, vy);
        const __m256d t1 = _mm256_mul_pd(zz, _mm256_mul_pd(d, d));
        const __m256d omz = _mm256_sub_pd(one, vz);
        const __m256d t2 = _mm256_mul_pd(
            _mm256_mul_pd(_mm256_mul_pd(vx, vy), vz), _mm256_mul_pd(omz, omz));
        const __m256d t3 = _mm256_mul_pd(omz2, omz2);
        const __m256d den = _mm256_add_pd(_mm256_sub_pd(t1, t2), t3);
        _mm256_storeu_pd(out + i, _mm256_div_pd(omz2, den));
    }
    if (n4 < n) {
        scalar_ops().kernel_closed_batch(z + n4, x + n4, y + n4, out + n4,
                                         n - n4);
    }
}

void cheb_step_avx2(const double* x, const double* ucur, double* uprev,
                    std::size_t n) {
    const std::size_t n4 = n - (n % 4);
    for (std::size_t i = 0; i < n4; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        const __m256d vu = _mm256_loadu_pd(ucur + i);
        const __m256d vp = _mm256_loadu_pd(uprev + i);
        _mm256_storeu_pd(uprev + i, _mm256_sub_pd(_mm256_mul_pd(vx, vu), vp));
    }
    for (std::size_t i = n4; i < n; ++i) uprev[i] = x[i] * ucur[i] - uprev[i];
}

// Uniforms come from the scalar counter (integer mixing is not the hot
// part); the central-branch rational is evaluated vector-wide when all four
// lanes fall in |q| <= 0.425, otherwise each lane takes the scalar path.
void normal_fill_avx2(std::uint64_t key, double* out, std::size_t n) {
    const std::size_t n4 = n - (n % 4);
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d qlim = _mm256_set1_pd(0.425);
    const __m256d rbase = _mm256_set1_pd(0.180625);
    for (std::size_t i = 0; i < n4; i += 4) {
        const double u0 = rng::uniform_from_bits(rng::counter_u64(key, i));
        const double u1 = rng::uniform_from_bits(rng::counter_u64(key, i + 1));
        const double u2 = rng::uniform_from_bits(rng::counter_u64(key, i + 2));
        const double u3 = rng::uniform_from_bits(rng::counter_u64(key, i + 3));
        const __m256d u = _mm256_setr_pd(u0, u1, u2, u3);
        const __m256d q = _mm256_sub_pd(u, half);
        const __m256d aq =
            _mm256_andnot_pd(_mm256_set1_pd(-0.0), q);  // |q|
        if (_mm256_movemask_pd(_mm256_cmp_pd(aq, qlim, _CMP_LE_OQ)) == 0xF) {
            const __m256d r = _mm256_sub_pd(rbase, _mm256_mul_pd(q, q));
            __m256d num = _mm256_set1_pd(rng::detail::kQA[7]);
            __m256d den = _mm256_set1_pd(rng::detail::kQB[7]);
            for (int k = 6; k >= 0; --k) {
                num = _mm256_add_pd(_mm256_mul_pd(num, r),
                                    _mm256_set1_pd(rng::detail::kQA[k]));
                den = _mm256_add_pd(_mm256_mul_pd(den, r),
                                    _mm256_set1_pd(rng::detail::kQB[k]));
            }
            _mm256_storeu_pd(out + i,
                             _mm256_mul_pd(q, _mm256_div_pd(num, den)));
        } else {
            out[i] = rng::normal_quantile(u0);
            out[i + 1] = rng::normal_quantile(u1);
            out[i + 2] = rng::normal_quantile(u2);
            out[i + 3] = rng::normal_quantile(u3);
        }
    }
    for (std::size_t i = n4; i < n; ++i) {
        out[i] = rng::normal_quantile(
            rng::uniform_from_bits(rng::counter_u64(key, i)));
    }
}

constexpr Ops kAvx2 = {
    "avx2",    dot_avx2,           axpy_avx2,      rank2_avx2,
    rot_avx2,  kernel_closed_avx2, cheb_step_avx2, normal_fill_avx2,
};

}  // namespace

const Ops* avx2_ops() {
    return __builtin_cpu_supports("avx2") ? &kAvx2 : nullptr;
}

}  // namespace goefluct::kernels

#else

namespace goefluct::kernels {
const Ops* avx2_ops() { return nullptr; }
}  // namespace goefluct::kernels

#endif
