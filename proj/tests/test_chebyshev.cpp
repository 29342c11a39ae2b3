#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "goefluct/chebyshev.hpp"
#include "goefluct/rng.hpp"

using namespace goefluct;

TEST_CASE("U_q values and recursion") {
    CHECK(chebyshev_u(0, 1.3) == 1.0);
    CHECK(chebyshev_u(1, 0.6) == 0.6);
    CHECK(chebyshev_u(2, 2.0) == doctest::Approx(3.0));
    CHECK(chebyshev_u(3, 0.0) == doctest::Approx(0.0));
    // Against the trigonometric definition U_q(2 cos t) = sin((q+1)t)/sin t.
    rng::Stream s{rng::stream_key(3, 0, 0)};
    for (int rep = 0; rep < 200; ++rep) {
        const double theta = 0.05 + 3.0 * s.next_uniform();
        const int q = static_cast<int>(s.next_uniform() * 20);
        const double want = std::sin((q + 1) * theta) / std::sin(theta);
        CHECK(chebyshev_u(q, 2.0 * std::cos(theta)) ==
              doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("semicircle moments are Catalan numbers") {
    CHECK(semicircle_moment(0) == 1.0);
    CHECK(semicircle_moment(1) == 0.0);
    CHECK(semicircle_moment(2) == 1.0);
    CHECK(semicircle_moment(4) == 2.0);
    CHECK(semicircle_moment(6) == 5.0);
    CHECK(semicircle_moment(8) == 14.0);
    CHECK(semicircle_moment(10) == 42.0);
    CHECK(semicircle_moment(7) == 0.0);
}

TEST_CASE("quadrature weights sum to 1 and nodes are symmetric") {
    for (int m : {1, 2, 3, 10, 50, 128, 512}) {
        const SemicircleQuadrature q = semicircle_quadrature(m);
        double sum = 0.0;
        for (double w : q.weights) sum += w;
        CHECK(std::fabs(sum - 1.0) <= 1e-14);
        for (int j = 0; j < m; ++j) {
            CHECK(q.nodes[j] == doctest::Approx(-q.nodes[m - 1 - j]).epsilon(1e-12));
        }
    }
}

TEST_CASE("quadrature integrates moments exactly to degree 2m-1") {
    {
        // m = 50 on x^4 pins the fourth Catalan moment to near-machine level.
        const SemicircleQuadrature q50 = semicircle_quadrature(50);
        double acc = 0.0;
        for (int j = 0; j < q50.m; ++j) {
            const double x2 = q50.nodes[j] * q50.nodes[j];
            acc += q50.weights[j] * x2 * x2;
        }
        CHECK(std::fabs(acc - 2.0) <= 1e-13);
    }
    const SemicircleQuadrature q = semicircle_quadrature(50);
    for (int k = 0; k <= 20; ++k) {
        double acc = 0.0, abs_acc = 0.0;
        for (int j = 0; j < q.m; ++j) {
            const double term = q.weights[j] * std::pow(q.nodes[j], k);
            acc += term;
            abs_acc += std::fabs(term);
        }
        // Odd moments cancel terms of size ~2^k; allow the summation's
        // condition number on top of the 1e-12 target.
        const double tol = 1e-12 * std::max(1.0, semicircle_moment(k)) +
                           1e-15 * abs_acc;
        CHECK(std::fabs(acc - semicircle_moment(k)) <= tol);
    }
}

TEST_CASE("chebyshev coefficients of reference functions") {
    // g = U_p as an explicit polynomial -> c_q = delta_{p,q}.
    // U_4(x) = x^4 - 3x^2 + 1.
    auto u4 = [](double x) { return ((x * x - 3.0) * x * x) + 1.0; };
    const ChebCoefficients c =
        cheb_coeffs(u4, 1.0, 8, cheb_coeffs_default_nodes(8, 4));
    for (int q = 0; q <= 8; ++q) {
        CHECK(std::fabs(c.coeffs[q] - (q == 4 ? 1.0 : 0.0)) <= 1e-12);
    }

    // x^2 = U_0 + U_2.
    const ChebCoefficients c2 = cheb_coeffs([](double x) { return x * x; }, 1.0,
                                            6, cheb_coeffs_default_nodes(6, 2));
    CHECK(c2.coeffs[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::fabs(c2.coeffs[1]) <= 1e-13);
    CHECK(c2.coeffs[2] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::fabs(c2.coeffs[3]) <= 1e-13);

    // g(x) = 2x at scale 3: g(3x) = 6x = 6 U_1.
    const ChebCoefficients c3 = cheb_coeffs([](double x) { return 2.0 * x; }, 3.0,
                                            4, cheb_coeffs_default_nodes(4, 1));
    CHECK(c3.coeffs[1] == doctest::Approx(6.0).epsilon(1e-13));
    CHECK(std::fabs(c3.coeffs[0]) <= 1e-13);
    CHECK(std::fabs(c3.coeffs[2]) <= 1e-13);
    CHECK(c3.tail_estimate <= 1e-13);
}

TEST_CASE("coefficients of random polynomials truncate at the degree") {
    rng::Stream s{rng::stream_key(17, 0, 0)};
    for (int rep = 0; rep < 50; ++rep) {
        const int deg = 1 + static_cast<int>(s.next_uniform() * 9);
        std::vector<double> coeffs(deg + 1);
        for (auto& c : coeffs) c = 2.0 * s.next_uniform() - 1.0;
        if (coeffs.back() == 0.0) coeffs.back() = 0.5;
        const int q_max = deg + 5;
        const ChebCoefficients c = cheb_coeffs(
            [&](double x) {
                double acc = 0.0;
                for (int k = deg; k >= 0; --k) acc = acc * x + coeffs[k];
                return acc;
            },
            1.0 + s.next_uniform(), q_max,
            cheb_coeffs_default_nodes(q_max, deg));
        double cmax = 0.0;
        for (int q = 0; q <= deg; ++q) cmax = std::max(cmax, std::fabs(c.coeffs[q]));
        for (int q = deg + 1; q <= q_max; ++q) {
            CHECK(std::fabs(c.coeffs[q]) <= 1e-12 * std::max(1.0, cmax));
        }
        // Reconstruction at a random point: sum c_q U_q(x) = g(scale x).
        const double x = -1.9 + 3.8 * s.next_uniform();
        double recon = 0.0;
        for (int q = 0; q <= q_max; ++q) recon += c.coeffs[q] * chebyshev_u(q, x);
        double want = 0.0;
        for (int k = deg; k >= 0; --k) want = want * (c.scale * x) + coeffs[k];
        CHECK(recon == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(cheb_coeffs([](double x) { return x; }, 1.0, -1, 8),
                    std::invalid_argument);
    CHECK_THROWS_AS(cheb_coeffs([](double x) { return x; }, 0.0, 4, 8),
                    std::invalid_argument);
    CHECK_THROWS_AS(semicircle_quadrature(0), std::invalid_argument);
    CHECK_THROWS_AS(chebyshev_u(-1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(semicircle_moment(-2), std::invalid_argument);
}

TEST_CASE("gauss-legendre on [0,1]") {
    for (int k : {1, 2, 8, 64}) {
        const GaussLegendre gl = gauss_legendre_01(k);
        double wsum = 0.0;
        for (double w : gl.weights) wsum += w;
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
        // Exact for polynomials of degree <= 2k-1: check x^{2k-1}.
        double acc = 0.0;
        for (int i = 0; i < k; ++i) {
            acc += gl.weights[i] * std::pow(gl.nodes[i], 2 * k - 1);
        }
        CHECK(acc == doctest::Approx(1.0 / (2.0 * k)).epsilon(1e-12));
    }
}
