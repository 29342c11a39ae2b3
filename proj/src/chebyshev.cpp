#include "goefluct/chebyshev.hpp"

#include <cmath>
#include <stdexcept>

#include "goefluct/kernels/kernels.hpp"

namespace goefluct {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

double chebyshev_u(int q, double x) {
    if (q < 0) throw std::invalid_argument("chebyshev_u: negative degree");
    double prev = 1.0;
    if (q == 0) return prev;
    double cur = x;
    for (int k = 1; k < q; ++k) {
        const double next = x * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

SemicircleQuadrature semicircle_quadrature(int m) {
    if (m < 1) throw std::invalid_argument("quadrature needs m >= 1");
    SemicircleQuadrature q;
    q.m = m;
    q.nodes.resize(m);
    q.weights.resize(m);
    const double step = kPi / (m + 1);
    for (int j = 1; j <= m; ++j) {
        const double s = std::sin(j * step);
        q.nodes[j - 1] = 2.0 * std::cos(j * step);
        q.weights[j - 1] = 2.0 / (m + 1) * (s * s);
    }
    return q;
}

double semicircle_moment(int k) {
    if (k < 0) throw std::invalid_argument("moment order must be >= 0");
    if (k % 2 == 1) return 0.0;
    const int p = k / 2;
    // Catalan convolution C_p = sum_i C_i C_{p-1-i}; exact in double well
    // past every order used here.
    std::vector<double> c(static_cast<std::size_t>(p) + 1, 0.0);
    c[0] = 1.0;
    for (int r = 1; r <= p; ++r) {
        double acc = 0.0;
        for (int i = 0; i < r; ++i) acc += c[i] * c[r - 1 - i];
        c[r] = acc;
    }
    return c[p];
}

int cheb_coeffs_default_nodes(int truncation, int degree) {
    if (degree < 0) return std::max(2 * truncation + 1, 257);
    return std::max(truncation + degree, 2 * truncation) + 1;
}

ChebCoefficients cheb_coeffs(const std::function<double(double)>& g,
                             double scale, int truncation, int m) {
    if (truncation < 0) throw std::invalid_argument("cheb_coeffs: Q < 0");
    if (!(scale > 0.0)) throw std::invalid_argument("cheb_coeffs: scale <= 0");
    if (m < 1) throw std::invalid_argument("cheb_coeffs: m < 1");

    const SemicircleQuadrature quad = semicircle_quadrature(m);
    const std::size_t nm = static_cast<std::size_t>(m);
    std::vector<double> gw(nm), uprev(nm, 1.0), ucur(nm);
    for (std::size_t j = 0; j < nm; ++j) {
        gw[j] = quad.weights[j] * g(scale * quad.nodes[j]);
        ucur[j] = quad.nodes[j];
    }

    const auto& ops = kernels::active();
    ChebCoefficients out;
    out.scale = scale;
    out.truncation = truncation;
    out.coeffs.resize(static_cast<std::size_t>(truncation) + 1);
    std::vector<double> ones(nm, 1.0);
    out.coeffs[0] = ops.dot(gw.data(), ones.data(), nm);
    for (int q = 1; q <= truncation; ++q) {
        out.coeffs[q] = ops.dot(gw.data(), ucur.data(), nm);
        if (q < truncation) {
            // uprev <- x*ucur - uprev, then swap: rolling U recursion.
            ops.cheb_step(quad.nodes.data(), ucur.data(), uprev.data(), nm);
            std::swap(uprev, ucur);
        }
    }
    for (std::size_t q = out.coeffs.size() >= 3 ? out.coeffs.size() - 3 : 0;
         q < out.coeffs.size(); ++q) {
        out.tail_estimate = std::max(out.tail_estimate, std::fabs(out.coeffs[q]));
    }
    return out;
}

GaussLegendre gauss_legendre_01(int k) {
    if (k < 1) throw std::invalid_argument("gauss_legendre_01: k < 1");
    GaussLegendre gl;
    gl.nodes.resize(k);
    gl.weights.resize(k);
    // Newton on P_k over [-1,1], Tricomi initial guesses; converges in a
    // handful of steps to machine precision.
    for (int i = 0; i < k; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (k + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= k; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            const double pk = p1;
            const double pkm1 = p0;
            dp = k * (x * pk - pkm1) / (x * x - 1.0);
            const double dx = pk / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        gl.nodes[i] = 0.5 * (1.0 - x);  // map [-1,1] -> [0,1], ascending
        gl.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return gl;
}

}  // namespace goefluct
