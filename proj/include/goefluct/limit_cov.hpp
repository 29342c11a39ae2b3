#pragma once

#include "goefluct/chebyshev.hpp"
#include "goefluct/covariance.hpp"
#include "goefluct/test_function.hpp"

namespace goefluct {

// Chebyshev generating kernel K_z(x,y) = sum_q U_q(x) U_q(y) z^q for
// |x|,|y| < 2 and 0 <= z < 1, in closed form
//   (1-z^2) / (z^2 (x-y)^2 - x y z (1-z)^2 + (1-z^2)^2),
// strictly positive on its domain.
double kernel_closed(double z, double x, double y);

// Partial sum of the series through degree Q.
double kernel_series(double z, double x, double y, int truncation);

// Remainder bound after degree Q, scaled to [-2,2]:
//   2 z^{Q+1} / ((1-z)^2 sqrt(1-(x/2)^2) sqrt(1-(y/2)^2)).
double kernel_series_tail_bound(double z, double x, double y, int truncation);

// Smallest truncation whose tail bound is <= tol (capped at 200000).
int kernel_series_terms_for(double z, double x, double y, double tol);

// E[phi(a) psi(b)] for a standard semicircular pair with correlation z,
//   = integral of phi(x) psi(y) K_z(x,y) over the product of two unit
// semicircle measures, by m x m tensor quadrature.
double semicircular_pair_expectation(const TestFunction& phi,
                                     const TestFunction& psi, double z, int m);

// The two covariance-formula interpretations kept side by side (see
// README): RCorrected multiplies by R(s,t), PaperLiteral does not.
enum class CovVariant { PaperLiteral, RCorrected };

// Density constant of the limiting measure: TheoremStated uses
// 1/(2 pi^2 sigma_s^2 sigma_t^2), ProofConsistent the product of the two
// semicircle densities, 1/(4 pi^2 sigma_s^2 sigma_t^2) — exactly half.
enum class DensityNormalization { TheoremStated, ProofConsistent };

struct SeriesCovOptions {
    CovVariant variant = CovVariant::RCorrected;
    int max_q = 512;
    double term_tol = 1e-14;  // stop after 3 consecutive terms below this
};

// Limiting covariance of the centered linear statistics for test functions
// f, g at times s, t, by the coefficient series
//   prefactor * 2 * sum_q c_q(f' o m_{sigma_s}) c_q(g' o m_{sigma_t})
//                         rho^q / (q+1).
// Valid for any rho in [-1,1], including rho = 1.
double limiting_cov_series(const TestFunction& f, const TestFunction& g,
                           const CovarianceModel& model, double s, double t,
                           const SeriesCovOptions& opts = {});

struct QuadratureCovOptions {
    CovVariant variant = CovVariant::RCorrected;
    DensityNormalization normalization = DensityNormalization::ProofConsistent;
    int m = 200;                // semicircle nodes per axis
    int z_points_initial = 64;  // Gauss-Legendre points on [0,1]
    int z_points_max = 1024;    // doubling cap
    double z_tol = 1e-9;        // doubling stops when the change is below
};

// Same limit by tensor semicircle quadrature in (x,y) and Gauss-Legendre in
// z against the closed-form kernel. Refuses rho > 1 - 1e-6 (use the series
// route there) and negative rho (outside the kernel domain).
double limiting_cov_quadrature(const TestFunction& f, const TestFunction& g,
                               const CovarianceModel& model, double s, double t,
                               const QuadratureCovOptions& opts = {});

// Single-time covariance by the classical double-integral formula over
// [-2 sigma, 2 sigma]^2, with the divided-difference integrand and Gauss-
// Chebyshev (first kind) nodes absorbing the edge singularities.
// AsPrinted uses the constant 1/(2 pi); SeriesCalibrated 1/(2 pi^2), the
// value that matches the series route and the direct trace oracles.
enum class PsConstant { AsPrinted, SeriesCalibrated };

double pastur_shcherbina_cov(const TestFunction& f, const TestFunction& g,
                             double sigma, int m,
                             PsConstant mode = PsConstant::SeriesCalibrated);

}  // namespace goefluct
