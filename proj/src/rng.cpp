#include "goefluct/rng.hpp"

#include <cmath>

namespace goefluct::rng {

double normal_quantile(double u) {
    const double q = u - 0.5;
    if (q <= 0.425 && q >= -0.425) {
        return detail::quantile_central(q);
    }
    const double p = q < 0.0 ? u : 1.0 - u;
    double r = std::sqrt(-std::log(p));
    double num, den;
    if (r <= 5.0) {
        r -= 1.6;
        num = detail::kQC[7];
        den = detail::kQD[7];
        for (int k = 6; k >= 0; --k) {
            num = num * r + detail::kQC[k];
            den = den * r + detail::kQD[k];
        }
    } else {
        r -= 5.0;
        num = detail::kQE[7];
        den = detail::kQF[7];
        for (int k = 6; k >= 0; --k) {
            num = num * r + detail::kQE[k];
            den = den * r + detail::kQF[k];
        }
    }
    const double x = num / den;
    return q < 0.0 ? -x : x;
}

}  // namespace goefluct::rng
