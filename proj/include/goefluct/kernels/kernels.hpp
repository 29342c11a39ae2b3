#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace goefluct::kernels {

// Batch primitives behind the numeric hot loops. One scalar reference
// implementation plus ISA variants selected once at startup. Every variant
// performs the same IEEE operations in the same order per element, and
// reductions use a fixed 4-stripe layout (lane l accumulates elements
// congruent to l mod 4, stripes combined as (s0+s1)+(s2+s3), tail appended
// sequentially), so all variants return bit-identical results.
struct Ops {
    const char* name;

    // 4-stripe blocked dot product.
    double (*dot)(const double* a, const double* b, std::size_t n);

    // y[i] += alpha * x[i]
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);

    // row[i] = (row[i] - f*u[i]) - g*w[i]   (symmetric rank-2 update row)
    void (*rank2_update)(double* row, double f, const double* u, double g,
                         const double* w, std::size_t n);

    // Plane rotation on two vectors:
    //   h = a[i]; a[i] = s*b[i] + c*h; b[i] = c*b[i] - s*h
    void (*rot)(double* a, double* b, double c, double s, std::size_t n);

    // out[i] = (1-z^2) / (z^2 (x-y)^2 - x y z (1-z)^2 + (1-z^2)^2)
    void (*kernel_closed_batch)(const double* z, const double* x,
                                const double* y, double* out, std::size_t n);

    // Chebyshev-U three-term step: uprev[i] = x[i]*ucur[i] - uprev[i]
    // (caller swaps the roles of uprev/ucur between calls).
    void (*cheb_step)(const double* x, const double* ucur, double* uprev,
                      std::size_t n);

    // out[i] = standard normal quantile of the uniform derived from the
    // splitmix64 output at counter i of the given stream key.
    void (*normal_fill)(std::uint64_t key, double* out, std::size_t n);
};

const Ops& scalar_ops();

// Null when the build or the running CPU lacks the instruction set.
const Ops* avx2_ops();
const Ops* neon_ops();

// Variant chosen once per process: best available, or the one named by
// GOE_FLUCT_SIMD (auto | scalar | avx2 | neon). Naming an unavailable
// variant throws.
const Ops& active();

}  // namespace goefluct::kernels
