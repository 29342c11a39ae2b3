#include "goefluct/limit_cov.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "goefluct/errors.hpp"
#include "goefluct/kernels/kernels.hpp"

namespace goefluct {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void require_kernel_domain(double z, double x, double y) {
    if (!(z >= 0.0 && z < 1.0)) {
        throw std::invalid_argument("kernel: z must lie in [0,1)");
    }
    if (!(std::fabs(x) < 2.0) || !(std::fabs(y) < 2.0)) {
        throw std::invalid_argument("kernel: x,y must lie in (-2,2)");
    }
}

double sigma_or_throw(const CovarianceModel& model, double t) {
    const double s = model.sigma(t);
    if (!(s > 0.0)) {
        throw degenerate_time_error(
            "limiting covariance undefined at a time with sigma = 0");
    }
    return s;
}

}  // namespace

double kernel_closed(double z, double x, double y) {
    require_kernel_domain(z, x, y);
    double out;
    kernels::active().kernel_closed_batch(&z, &x, &y, &out, 1);
    return out;
}

double kernel_series(double z, double x, double y, int truncation) {
    require_kernel_domain(z, x, y);
    if (truncation < 0) throw std::invalid_argument("kernel_series: Q < 0");
    double upx = 1.0, ucx = x;  // U_{q-1}, U_q at x
    double upy = 1.0, ucy = y;
    double zq = z;
    double sum = 1.0;  // q = 0 term
    for (int q = 1; q <= truncation; ++q) {
        sum += ucx * ucy * zq;
        zq *= z;
        const double nx = x * ucx - upx;
        upx = ucx;
        ucx = nx;
        const double ny = y * ucy - upy;
        upy = ucy;
        ucy = ny;
    }
    return sum;
}

double kernel_series_tail_bound(double z, double x, double y, int truncation) {
    require_kernel_domain(z, x, y);
    const double sx = std::sqrt(1.0 - 0.25 * x * x);
    const double sy = std::sqrt(1.0 - 0.25 * y * y);
    return 2.0 * std::pow(z, truncation + 1) / ((1.0 - z) * (1.0 - z) * sx * sy);
}

int kernel_series_terms_for(double z, double x, double y, double tol) {
    require_kernel_domain(z, x, y);
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (z == 0.0) return 0;
    const double sx = std::sqrt(1.0 - 0.25 * x * x);
    const double sy = std::sqrt(1.0 - 0.25 * y * y);
    const double b0 = 2.0 / ((1.0 - z) * (1.0 - z) * sx * sy);
    const double need = std::log(tol / b0) / std::log(z);  // z^{Q+1} <= tol/b0
    const double q = std::ceil(need) - 1.0;
    if (q <= 0.0) return 0;
    return static_cast<int>(std::min(q, 200000.0));
}

double semicircular_pair_expectation(const TestFunction& phi,
                                     const TestFunction& psi, double z, int m) {
    if (!(z >= 0.0 && z < 1.0)) {
        throw std::invalid_argument("pair expectation: z must lie in [0,1)");
    }
    const SemicircleQuadrature quad = semicircle_quadrature(m);
    const std::size_t nm = static_cast<std::size_t>(m);
    std::vector<double> wphi(nm), wpsi(nm), zrow(nm, z), xrow(nm), krow(nm);
    for (std::size_t j = 0; j < nm; ++j) {
        wphi[j] = quad.weights[j] * phi(quad.nodes[j]);
        wpsi[j] = quad.weights[j] * psi(quad.nodes[j]);
    }
    const auto& ops = kernels::active();
    double total = 0.0;
    for (std::size_t i = 0; i < nm; ++i) {
        for (std::size_t j = 0; j < nm; ++j) xrow[j] = quad.nodes[i];
        ops.kernel_closed_batch(zrow.data(), xrow.data(), quad.nodes.data(),
                                krow.data(), nm);
        total += wphi[i] * ops.dot(wpsi.data(), krow.data(), nm);
    }
    return total;
}

double limiting_cov_series(const TestFunction& f, const TestFunction& g,
                           const CovarianceModel& model, double s, double t,
                           const SeriesCovOptions& opts) {
    const double sigma_s = sigma_or_throw(model, s);
    const double sigma_t = sigma_or_throw(model, t);
    const double rho = model.rho(s, t);

    // Polynomial derivatives truncate exactly at their degree; built-ins
    // use the full budget.
    const int df = f.is_polynomial() ? std::max(f.degree() - 1, 0) : -1;
    const int dg = g.is_polynomial() ? std::max(g.degree() - 1, 0) : -1;
    int q_max = opts.max_q;
    if (df >= 0 && dg >= 0) q_max = std::min(q_max, std::max(df, dg) + 1);
    const int degree_hint = (df >= 0 && dg >= 0) ? std::max(df, dg) : -1;
    const int nodes = cheb_coeffs_default_nodes(q_max, degree_hint);

    const ChebCoefficients cf = cheb_coeffs(
        [&](double u) { return f.derivative(u); }, sigma_s, q_max, nodes);
    const ChebCoefficients cg = cheb_coeffs(
        [&](double u) { return g.derivative(u); }, sigma_t, q_max, nodes);

    double sum = 0.0;
    double rho_q = 1.0;
    int below = 0;
    for (int q = 0; q <= q_max; ++q) {
        const double term = cf.coeffs[q] * cg.coeffs[q] * rho_q /
                            (static_cast<double>(q) + 1.0);
        sum += term;
        if (std::fabs(term) < opts.term_tol) {
            if (++below >= 3) break;
        } else {
            below = 0;
        }
        rho_q *= rho;
    }

    const double prefactor =
        opts.variant == CovVariant::RCorrected ? model.evaluate(s, t) : 1.0;
    return 2.0 * prefactor * sum;
}

double limiting_cov_quadrature(const TestFunction& f, const TestFunction& g,
                               const CovarianceModel& model, double s, double t,
                               const QuadratureCovOptions& opts) {
    const double sigma_s = sigma_or_throw(model, s);
    const double sigma_t = sigma_or_throw(model, t);
    const double rho = model.rho(s, t);
    if (rho < 0.0) {
        throw std::invalid_argument(
            "quadrature route requires rho >= 0; use the series route");
    }
    if (rho > 1.0 - 1e-6) {
        throw std::domain_error(
            "quadrature route refuses rho near 1; use the series route");
    }

    const SemicircleQuadrature quad = semicircle_quadrature(opts.m);
    const std::size_t nm = static_cast<std::size_t>(opts.m);
    std::vector<double> wf(nm), wg(nm);
    for (std::size_t j = 0; j < nm; ++j) {
        wf[j] = quad.weights[j] * f.derivative(sigma_s * quad.nodes[j]);
        wg[j] = quad.weights[j] * g.derivative(sigma_t * quad.nodes[j]);
    }

    const auto& ops = kernels::active();
    std::vector<double> zrow(nm), xrow(nm), krow(nm);
    // Tensor form of the z-smoothed kernel: for each Gauss-Legendre node,
    // accumulate w_l * (wf^T K_{z_l rho} wg).
    auto evaluate_with = [&](int zk) {
        const GaussLegendre gl = gauss_legendre_01(zk);
        double total = 0.0;
        for (int l = 0; l < zk; ++l) {
            const double zval = gl.nodes[l] * rho;
            for (std::size_t j = 0; j < nm; ++j) zrow[j] = zval;
            double inner = 0.0;
            for (std::size_t i = 0; i < nm; ++i) {
                for (std::size_t j = 0; j < nm; ++j) xrow[j] = quad.nodes[i];
                ops.kernel_closed_batch(zrow.data(), xrow.data(),
                                        quad.nodes.data(), krow.data(), nm);
                inner += wf[i] * ops.dot(wg.data(), krow.data(), nm);
            }
            total += gl.weights[l] * inner;
        }
        return total;
    };

    double value = evaluate_with(opts.z_points_initial);
    for (int zk = 2 * opts.z_points_initial; zk <= opts.z_points_max; zk *= 2) {
        const double refined = evaluate_with(zk);
        const double change = std::fabs(refined - value);
        value = refined;
        if (change < opts.z_tol) break;
    }

    const double norm_factor =
        opts.normalization == DensityNormalization::TheoremStated ? 2.0 : 1.0;
    const double prefactor =
        opts.variant == CovVariant::RCorrected ? model.evaluate(s, t) : 1.0;
    return 2.0 * prefactor * norm_factor * value;
}

double pastur_shcherbina_cov(const TestFunction& f, const TestFunction& g,
                             double sigma, int m, PsConstant mode) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    if (m < 2) throw std::invalid_argument("need at least 2 nodes");
    // Gauss-Chebyshev (first kind) nodes absorb the 1/sqrt(4s^2-l^2) edge
    // weights exactly.
    std::vector<double> lambda(m), fv(m), gv(m), fd(m), gd(m);
    for (int k = 0; k < m; ++k) {
        lambda[k] = 2.0 * sigma * std::cos((k + 0.5) * kPi / m);
        fv[k] = f(lambda[k]);
        gv[k] = g(lambda[k]);
        fd[k] = f.derivative(lambda[k]);
        gd[k] = g.derivative(lambda[k]);
    }
    const double w = kPi / m;
    const double four_s2 = 4.0 * sigma * sigma;
    double total = 0.0;
    for (int k = 0; k < m; ++k) {
        for (int l = 0; l < m; ++l) {
            double df, dg;
            if (k == l) {
                df = fd[k];
                dg = gd[k];
            } else {
                const double dl = lambda[k] - lambda[l];
                df = (fv[k] - fv[l]) / dl;
                dg = (gv[k] - gv[l]) / dl;
            }
            total += df * dg * (four_s2 - lambda[k] * lambda[l]);
        }
    }
    total *= w * w;
    const double c =
        mode == PsConstant::AsPrinted ? 1.0 / (2.0 * kPi) : 1.0 / (2.0 * kPi * kPi);
    return c * total;
}

}  // namespace goefluct
