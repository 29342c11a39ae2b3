#pragma once

#include <functional>
#include <vector>

namespace goefluct {

// Chebyshev polynomial of the second kind on [-2,2]:
//   U_0 = 1, U_1(x) = x, U_{q+1}(x) = x U_q(x) - U_{q-1}(x).
// The same recursion is applied outside [-2,2] (extrapolation).
double chebyshev_u(int q, double x);

// Gauss quadrature for the unit semicircle measure
// sqrt(4-x^2)/(2 pi) dx on [-2,2]:
//   nodes x_j = 2 cos(j pi/(m+1)), weights w_j = 2 sin^2(j pi/(m+1))/(m+1),
// exact for polynomials of degree <= 2m-1; weights sum to 1.
struct SemicircleQuadrature {
    int m = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

SemicircleQuadrature semicircle_quadrature(int m);

// k-th moment of the unit semicircle law: 0 for odd k, the Catalan number
// C_{k/2} for even k, computed by the integer convolution recursion.
double semicircle_moment(int k);

// Coefficients of x -> g(scale * x) against the unit semicircle measure in
// the U_q basis, by quadrature: c_q = sum_j w_j g(scale x_j) U_q(x_j).
// Exact for polynomials when 2m-1 >= Q + deg g. tail_estimate is the
// largest |c_q| over the last three computed coefficients (zero signals
// clean truncation).
struct ChebCoefficients {
    std::vector<double> coeffs;  // c_0..c_Q
    double scale = 1.0;
    int truncation = 0;
    double tail_estimate = 0.0;
};

ChebCoefficients cheb_coeffs(const std::function<double(double)>& g,
                             double scale, int truncation, int m);

// Default node count per the exactness rule above; degree < 0 means a
// non-polynomial integrand and falls back to a fixed generous count.
int cheb_coeffs_default_nodes(int truncation, int degree);

// Gauss-Legendre nodes/weights on [0,1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussLegendre gauss_legendre_01(int k);

}  // namespace goefluct
