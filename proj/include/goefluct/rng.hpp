#pragma once

#include <cstdint>
#include <span>

namespace goefluct::rng {

// splitmix64 finalizer (Stafford mix13). Bijective 64-bit avalanche.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// Stream key for one (seed, replica, entry) triple. Streams are the
// splitmix64 sequences started at these keys; distinct triples give
// independent counters up to the avalanche quality of mix64.
inline constexpr std::uint64_t stream_key(std::uint64_t seed,
                                          std::uint64_t replica,
                                          std::uint64_t entry) {
    std::uint64_t k = mix64(seed ^ 0xA0761D6478BD642Full);
    k = mix64(k ^ mix64(replica ^ 0xE7037ED1A0B428DBull));
    k = mix64(k ^ mix64(entry ^ 0x8EBC6AF09C88C6E3ull));
    return k;
}

// i-th output of the stream (counter-based; any order, any thread).
inline constexpr std::uint64_t counter_u64(std::uint64_t key, std::uint64_t i) {
    return mix64(key + (i + 1) * kGolden);
}

// Uniform in (0,1): top 53 bits, offset half an ulp so 0 is unreachable.
inline double uniform_from_bits(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal quantile, Wichura's AS 241 (PPND16). The central branch
// |u - 0.5| <= 0.425 is a pure rational function; tails use log/sqrt.
// Relative accuracy about 1e-15. Fixed so that sampled output is
// reproducible; tail values can differ in the last ulp across libm
// implementations of log, never on a given platform.
double normal_quantile(double u);

// Central-branch rational evaluated at q = u - 0.5, valid for |q| <= 0.425.
// Split out so SIMD variants mirror the exact operation order.
namespace detail {
inline constexpr double kQA[8] = {
    3.3871328727963666080e0,  1.3314166789178437745e2, 1.9715909503065514427e3,
    1.3731693765509461125e4,  4.5921953931549871457e4, 6.7265770927008700853e4,
    3.3430575583588128105e4,  2.5090809287301226727e3};
inline constexpr double kQB[8] = {
    1.0,                      4.2313330701600911252e1, 6.8718700749205790830e2,
    5.3941960214247511077e3,  2.1213794301586595867e4, 3.9307895800092710610e4,
    2.8729085735721942674e4,  5.2264952788528545610e3};
inline constexpr double kQC[8] = {
    1.42343711074968357734e0,    4.63033784615654529590e0,
    5.76949722146069140550e0,    3.64784832476320460504e0,
    1.27045825245236838258e0,    2.41780725177450611770e-1,
    2.27238449892691845833e-2,   7.74545014278341407640e-4};
inline constexpr double kQD[8] = {
    1.0,                         2.05319162663775882187e0,
    1.67638483018380384940e0,    6.89767334985100004550e-1,
    1.48103976427480074590e-1,   1.51986665636164571966e-2,
    5.47593808499534494600e-4,   1.05075007164441684324e-9};
inline constexpr double kQE[8] = {
    6.65790464350110377720e0,    5.46378491116411436990e0,
    1.78482653991729133580e0,    2.96560571828504891230e-1,
    2.65321895265761230930e-2,   1.24266094738807843860e-3,
    2.71155556874348757815e-5,   2.01033439929228813265e-7};
inline constexpr double kQF[8] = {
    1.0,                         5.99832206555887937690e-1,
    1.36929880922735805310e-1,   1.48753612908506148525e-2,
    7.86869131145613259100e-4,   1.84631831751005468180e-5,
    1.42151175831644588870e-7,   2.04426310338993978564e-15};

inline double quantile_central(double q) {
    const double r = 0.180625 - q * q;
    double num = kQA[7];
    double den = kQB[7];
    for (int k = 6; k >= 0; --k) {
        num = num * r + kQA[k];
        den = den * r + kQB[k];
    }
    return q * (num / den);
}
}  // namespace detail

// Sequential view of a counter stream, for call sites that draw one at a
// time (tests, correlated-pair sampling).
struct Stream {
    std::uint64_t key = 0;
    std::uint64_t counter = 0;

    std::uint64_t next_u64() { return counter_u64(key, counter++); }
    double next_uniform() { return uniform_from_bits(next_u64()); }
    double next_normal() { return normal_quantile(next_uniform()); }
};

}  // namespace goefluct::rng
