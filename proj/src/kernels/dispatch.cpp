#include "goefluct/kernels/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace goefluct::kernels {
namespace {

const Ops& choose() {
    const char* env = std::getenv("GOE_FLUCT_SIMD");
    const std::string mode = env ? env : "auto";
    if (mode == "scalar") return scalar_ops();
    if (mode == "avx2") {
        if (const Ops* ops = avx2_ops()) return *ops;
        throw std::runtime_error("GOE_FLUCT_SIMD=avx2 but AVX2 is unavailable");
    }
    if (mode == "neon") {
        if (const Ops* ops = neon_ops()) return *ops;
        throw std::runtime_error("GOE_FLUCT_SIMD=neon but NEON is unavailable");
    }
    if (mode != "auto") {
        throw std::runtime_error("unknown GOE_FLUCT_SIMD value: " + mode);
    }
    if (const Ops* ops = avx2_ops()) return *ops;
    if (const Ops* ops = neon_ops()) return *ops;
    return scalar_ops();
}

}  // namespace

const Ops& active() {
    static const Ops& chosen = choose();
    return chosen;
}

}  // namespace goefluct::kernels
