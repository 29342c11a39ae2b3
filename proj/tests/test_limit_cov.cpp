#include <doctest.h>

#include <cmath>

#include "goefluct/errors.hpp"
#include "goefluct/limit_cov.hpp"
#include "goefluct/rng.hpp"

using namespace goefluct;

TEST_CASE("kernel closed form: fixed points") {
    CHECK(kernel_closed(0.0, 1.2, -0.7) == doctest::Approx(1.0));
    CHECK(kernel_closed(0.5, 0.0, 0.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(kernel_closed(1.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(kernel_closed(0.5, 2.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(kernel_closed(-0.1, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("kernel series equals closed form within the tail bound") {
    CHECK(kernel_series(0.7, 1.1, -1.3, 0) == 1.0);
    // The spec's anchor triple at Q = 200.
    CHECK(std::fabs(kernel_series(0.3, 1.0, -0.5, 200) -
                    kernel_closed(0.3, 1.0, -0.5)) <= 1e-12);

    rng::Stream s{rng::stream_key(1001, 0, 0)};
    for (int rep = 0; rep < 2000; ++rep) {
        const double z = 0.99 * s.next_uniform();
        const double x = -1.99 + 3.98 * s.next_uniform();
        const double y = -1.99 + 3.98 * s.next_uniform();
        const int q = kernel_series_terms_for(z, x, y, 1e-9);
        const double series = kernel_series(z, x, y, q);
        const double closed = kernel_closed(z, x, y);
        const double bound = kernel_series_tail_bound(z, x, y, q) +
                             1e-10 * (1.0 + std::fabs(closed));
        CHECK(std::fabs(series - closed) <= bound);
    }
}

TEST_CASE("kernel positivity on the stress grid") {
    // 60 x 60 x 10 here; the acceptance suite runs the full 200 x 200 x 20.
    for (int iz = 0; iz < 10; ++iz) {
        const double z = 0.99 * iz / 9.0;
        for (int ix = 0; ix < 60; ++ix) {
            const double x = -1.99 + 3.98 * ix / 59.0;
            for (int iy = 0; iy < 60; ++iy) {
                const double y = -1.99 + 3.98 * iy / 59.0;
                REQUIRE(kernel_closed(z, x, y) > 0.0);
            }
        }
    }
}

TEST_CASE("edge stress: tail-bound-chosen truncation near the corner") {
    const double z = 0.9, x = 1.9, y = 1.9;
    const int q = kernel_series_terms_for(z, x, y, 1e-8);
    CHECK(std::fabs(kernel_series(z, x, y, q) - kernel_closed(z, x, y)) <= 1e-8);
}

TEST_CASE("semicircular pair expectation: orthonormality") {
    const TestFunction u1 = TestFunction::polynomial({0.0, 1.0});
    const TestFunction u2 = TestFunction::polynomial({-1.0, 0.0, 1.0});
    const TestFunction one = TestFunction::polynomial({1.0});
    CHECK(semicircular_pair_expectation(u2, u2, 0.5, 200) ==
          doctest::Approx(0.25).epsilon(1e-12));
    CHECK(std::fabs(semicircular_pair_expectation(u1, u2, 0.37, 200)) <= 1e-12);
    CHECK(semicircular_pair_expectation(one, one, 0.8, 200) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // delta_{p,q} z^p over p,q <= 12, z in {0, 0.3, 0.9}.
    std::vector<TestFunction> u;
    std::vector<double> prev = {1.0}, cur = {0.0, 1.0};
    u.push_back(TestFunction::polynomial(prev));
    u.push_back(TestFunction::polynomial(cur));
    for (int q = 2; q <= 12; ++q) {
        std::vector<double> next(q + 1, 0.0);
        for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] = cur[i];
        for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
        prev = cur;
        cur = next;
        u.push_back(TestFunction::polynomial(next));
    }
    for (double z : {0.0, 0.3, 0.9}) {
        for (int p = 0; p <= 12; ++p) {
            for (int q = p; q <= 12; ++q) {
                const double got = semicircular_pair_expectation(u[p], u[q], z, 200);
                const double want = (p == q) ? std::pow(z, p) : 0.0;
                CHECK(std::fabs(got - want) <= 1e-10);
            }
        }
    }
}

TEST_CASE("limiting covariance series: trace oracles") {
    const auto bm = CovarianceModel::brownian();
    const TestFunction fx = TestFunction::monomial(1);
    const TestFunction fx2 = TestFunction::monomial(2);

    // Var(Tr Y(1)) = 2 R(1,1): diagonal entries are sqrt(2/n) X_ii, so the
    // trace is Gaussian with variance n (2/n) R = 2R.
    CHECK(limiting_cov_series(fx, fx, bm, 1.0, 1.0) ==
          doctest::Approx(2.0).epsilon(1e-12));
    SeriesCovOptions pl;
    pl.variant = CovVariant::PaperLiteral;
    CHECK(limiting_cov_series(fx, fx, bm, 1.0, 1.0, pl) ==
          doctest::Approx(2.0).epsilon(1e-12));

    // Var(Tr A^2) -> 4 from the entry variances (4 + 4/n at finite n).
    CHECK(limiting_cov_series(fx2, fx2, bm, 1.0, 1.0) ==
          doctest::Approx(4.0).epsilon(1e-12));

    // Cross-time: Cov(Tr Y(s), Tr Y(t)) = 2 R(s,t) = 1 at s=1/2, t=1.
    CHECK(limiting_cov_series(fx, fx, bm, 0.5, 1.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(limiting_cov_series(fx, fx, bm, 0.5, 1.0, pl) ==
          doctest::Approx(2.0).epsilon(1e-12));

    // rho = 0 kills every q >= 1 term; f = x^2 has no q = 0 coefficient.
    const auto indep = CovarianceModel::tabulated({1.0, 2.0}, {{1.0, 0.0}, {0.0, 1.0}});
    CHECK(std::fabs(limiting_cov_series(fx2, fx2, indep, 1.0, 2.0)) <= 1e-14);
    CHECK(std::fabs(limiting_cov_series(fx2, fx2, indep, 1.0, 2.0, pl)) <= 1e-14);

    // Degenerate time refuses.
    CHECK_THROWS_AS(limiting_cov_series(fx, fx, bm, 0.0, 1.0),
                    degenerate_time_error);

    // Negative cross-covariance (series route only): for f = g = x^2 and
    // unit marginals the limit is 4 R^2 by the direct Gaussian computation
    // Cov(xi^2, eta^2) = 2 Cov(xi, eta)^2 summed over entries.
    const auto anti =
        CovarianceModel::tabulated({1.0, 2.0}, {{1.0, -0.5}, {-0.5, 1.0}});
    CHECK(anti.rho(1.0, 2.0) == doctest::Approx(-0.5));
    CHECK(limiting_cov_series(fx2, fx2, anti, 1.0, 2.0) ==
          doctest::Approx(4.0 * 0.25).epsilon(1e-12));
    // f = g = x picks up the R prefactor with its sign.
    CHECK(limiting_cov_series(fx, fx, anti, 1.0, 2.0) ==
          doctest::Approx(2.0 * -0.5).epsilon(1e-12));

    // Exact symmetry under (f,s) <-> (g,t).
    const auto fbm = CovarianceModel::fractional_brownian(0.6);
    const TestFunction f3 = TestFunction::monomial(3);
    CHECK(limiting_cov_series(f3, fx2, fbm, 0.5, 1.2) ==
          limiting_cov_series(fx2, f3, fbm, 1.2, 0.5));
}

TEST_CASE("limiting covariance quadrature: route equivalence and flags") {
    const auto fbm = CovarianceModel::fractional_brownian(0.7);
    const TestFunction f3 = TestFunction::monomial(3);
    const TestFunction f2 = TestFunction::monomial(2);

    const double series = limiting_cov_series(f3, f2, fbm, 0.5, 1.0);
    QuadratureCovOptions q;
    const double quad = limiting_cov_quadrature(f3, f2, fbm, 0.5, 1.0, q);
    CHECK(std::fabs(series - quad) <= 1e-6 * std::max(1.0, std::fabs(series)));

    // TheoremStated density constant doubles the ProofConsistent value.
    QuadratureCovOptions ts = q;
    ts.normalization = DensityNormalization::TheoremStated;
    CHECK(limiting_cov_quadrature(f3, f2, fbm, 0.5, 1.0, ts) ==
          doctest::Approx(2.0 * quad).epsilon(1e-15));

    // rho = 0: PaperLiteral/ProofConsistent keeps only the q = 0 term.
    const auto indep = CovarianceModel::tabulated({1.0, 2.0}, {{1.0, 0.0}, {0.0, 1.0}});
    const TestFunction fx = TestFunction::monomial(1);
    QuadratureCovOptions pl = q;
    pl.variant = CovVariant::PaperLiteral;
    CHECK(limiting_cov_quadrature(fx, fx, indep, 1.0, 2.0, pl) ==
          doctest::Approx(2.0).epsilon(1e-9));
    CHECK(std::fabs(limiting_cov_quadrature(fx, fx, indep, 1.0, 2.0, q)) <= 1e-14);

    // rho = 1 refuses toward the series route.
    const auto bm = CovarianceModel::brownian();
    CHECK_THROWS_AS(limiting_cov_quadrature(fx, fx, bm, 1.0, 1.0, q),
                    std::domain_error);
}

TEST_CASE("route equivalence across H and degree") {
    const std::vector<TestFunction> fs = {
        TestFunction::monomial(1), TestFunction::monomial(2),
        TestFunction::polynomial({0.0, 1.0, 0.5, 0.0, 0.0, 0.0, 0.25})};
    for (double h : {0.3, 0.5, 0.7}) {
        const auto model = CovarianceModel::fractional_brownian(h);
        for (const auto& f : fs) {
            for (const auto& g : fs) {
                const double s = 0.4, t = 1.1;  // rho < 0.95 for these H
                REQUIRE(model.rho(s, t) <= 0.95);
                const double a = limiting_cov_series(f, g, model, s, t);
                const double b = limiting_cov_quadrature(f, g, model, s, t);
                CHECK(std::fabs(a - b) <= 1e-6 * std::max(1.0, std::fabs(a)));
            }
        }
    }
}

TEST_CASE("route equivalence at the rho = 0.95 boundary") {
    // Brownian at s = 0.9, t = 1 gives rho = sqrt(0.9) = 0.9487, just under
    // the quadrature refusal band; a degree-6 mixed-parity polynomial keeps
    // every coefficient alive.
    const auto bm = CovarianceModel::brownian();
    const TestFunction f =
        TestFunction::polynomial({0.0, 1.0, 1.0, 1.0, 0.0, 0.0, 1.0});
    REQUIRE(bm.rho(0.9, 1.0) <= 0.95);
    const double a = limiting_cov_series(f, f, bm, 0.9, 1.0);
    const double b = limiting_cov_quadrature(f, f, bm, 0.9, 1.0);
    CHECK(std::fabs(a - b) <= 1e-6);
    CHECK(a > 100.0);  // not a vacuous zero-zero comparison
}

TEST_CASE("built-in test functions go through both routes consistently") {
    // Non-polynomial coefficients exercise the adaptive truncation; sin'
    // and gauss' decay fast in the U-basis, so the routes must agree to
    // the same tolerance as polynomials.
    const auto fbm = CovarianceModel::fractional_brownian(0.6);
    const TestFunction fsin = TestFunction::builtin("sin");
    const TestFunction fgauss = TestFunction::builtin("gauss");
    const TestFunction fx2 = TestFunction::monomial(2);
    for (const auto& f : {fsin, fgauss}) {
        for (const auto& g : {fsin, fx2}) {
            const double a = limiting_cov_series(f, g, fbm, 0.5, 1.2);
            const double b = limiting_cov_quadrature(f, g, fbm, 0.5, 1.2);
            CHECK(std::fabs(a - b) <= 1e-6 * std::max(1.0, std::fabs(a)));
        }
    }
    // Single time: series equals the classical double integral.
    const double sigma = fbm.sigma(1.2);
    const double series = limiting_cov_series(fsin, fsin, fbm, 1.2, 1.2);
    CHECK(pastur_shcherbina_cov(fsin, fsin, sigma, 600) ==
          doctest::Approx(series).epsilon(1e-6));
    CHECK(series > 0.0);  // a variance
}

TEST_CASE("pastur-shcherbina single-time formula") {
    const TestFunction fx = TestFunction::monomial(1);
    const TestFunction fx2 = TestFunction::monomial(2);
    CHECK(pastur_shcherbina_cov(fx, fx, 1.0, 400) ==
          doctest::Approx(2.0).epsilon(1e-10));
    CHECK(pastur_shcherbina_cov(fx, fx, 1.0, 400, PsConstant::AsPrinted) ==
          doctest::Approx(2.0 * 3.141592653589793).epsilon(1e-10));
    CHECK(pastur_shcherbina_cov(fx2, fx2, 1.0, 400) ==
          doctest::Approx(4.0).epsilon(1e-6));
    // sigma != 1 cross-check against the series route at s = t.
    const auto fbm = CovarianceModel::fractional_brownian(0.8);
    const double sigma = fbm.sigma(1.7);
    const double series = limiting_cov_series(fx2, fx2, fbm, 1.7, 1.7);
    CHECK(pastur_shcherbina_cov(fx2, fx2, sigma, 600) ==
          doctest::Approx(series).epsilon(1e-6));
}
