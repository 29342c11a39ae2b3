#include <doctest.h>

#include <cmath>

#include "goefluct/covariance.hpp"
#include "goefluct/rng.hpp"

using namespace goefluct;

TEST_CASE("built-in covariance values") {
    const auto bm = CovarianceModel::brownian();
    const auto fbm_half = CovarianceModel::fractional_brownian(0.5);
    const auto fbm = CovarianceModel::fractional_brownian(0.75);

    CHECK(fbm_half.evaluate(1.0, 2.0) == doctest::Approx(1.0));
    CHECK(fbm.evaluate(1.0, 1.0) == doctest::Approx(1.0));
    // Direct arithmetic on the fBm formula: (1 + 2^{1.5} - 1)/2 = 2^{0.5}.
    CHECK(fbm.evaluate(1.0, 2.0) ==
          doctest::Approx(0.5 * (1.0 + std::pow(2.0, 1.5) - 1.0)).epsilon(1e-14));
    CHECK(fbm.evaluate(1.0, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

    CHECK(bm.rho(0.5, 1.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(bm.rho(0.7, 0.7) == doctest::Approx(1.0));
    CHECK(fbm_half.sigma(4.0) == doctest::Approx(2.0));

    const auto ou = CovarianceModel::ornstein_uhlenbeck(1.3);
    CHECK(ou.evaluate(2.0, 2.0) == doctest::Approx(1.0));
    CHECK(ou.sigma(0.0) == doctest::Approx(1.0));
    CHECK(ou.evaluate(1.0, 2.5) == doctest::Approx(std::exp(-1.3 * 1.5)));
}

TEST_CASE("domain errors") {
    const auto fbm = CovarianceModel::fractional_brownian(0.75);
    CHECK_THROWS_AS(fbm.evaluate(-1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(fbm.rho(0.0, 1.0), degenerate_time_error);
    CHECK_THROWS_AS(CovarianceModel::fractional_brownian(0.0), std::invalid_argument);
    CHECK_THROWS_AS(CovarianceModel::fractional_brownian(1.0), std::invalid_argument);
    CHECK_THROWS_AS(CovarianceModel::ornstein_uhlenbeck(0.0), std::invalid_argument);

    const auto tab = CovarianceModel::tabulated({1.0, 2.0}, {{1.0, 0.3}, {0.3, 2.0}});
    CHECK(tab.evaluate(1.0, 2.0) == doctest::Approx(0.3));
    CHECK_THROWS_AS(tab.evaluate(1.5, 2.0), off_grid_error);
    CHECK_THROWS_AS(CovarianceModel::tabulated({1.0, 2.0}, {{1.0, 0.3}, {0.4, 2.0}}),
                    std::invalid_argument);
}

TEST_CASE("symmetry and H=1/2 consistency on random pairs") {
    const auto fbm_h = CovarianceModel::fractional_brownian(0.3);
    const auto fbm_half = CovarianceModel::fractional_brownian(0.5);
    const auto bm = CovarianceModel::brownian();
    rng::Stream s{rng::stream_key(2024, 0, 0)};
    for (int i = 0; i < 1000; ++i) {
        const double a = 5.0 * s.next_uniform();
        const double b = 5.0 * s.next_uniform();
        CHECK(fbm_h.evaluate(a, b) == fbm_h.evaluate(b, a));  // exact
        CHECK(bm.evaluate(a, b) == bm.evaluate(b, a));
        CHECK(std::fabs(fbm_half.evaluate(a, b) - bm.evaluate(a, b)) <= 1e-14);
    }
}

TEST_CASE("partial_s matches finite differences for analytic kinds") {
    const auto fbm = CovarianceModel::fractional_brownian(0.7);
    const auto ou = CovarianceModel::ornstein_uhlenbeck(1.3);
    const double h = 1e-6;
    for (const auto& model : {fbm, ou}) {
        REQUIRE(model.has_partial());
        for (auto [s, t] : {std::pair{0.5, 1.5}, {2.0, 0.7}, {1.2, 1.9}}) {
            const double fd =
                (model.evaluate(s + h, t) - model.evaluate(s - h, t)) / (2.0 * h);
            CHECK(model.partial_s(s, t) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
    CHECK(CovarianceModel::brownian().partial_s(0.5, 1.0) == 1.0);
    CHECK(CovarianceModel::brownian().partial_s(1.5, 1.0) == 0.0);
    const auto tab = CovarianceModel::tabulated({1.0}, {{1.0}});
    CHECK(!tab.has_partial());
    CHECK_THROWS_AS(tab.partial_s(1.0, 1.0), std::logic_error);
}

TEST_CASE("gram factor: hand Cholesky and degenerate grids") {
    const auto bm = CovarianceModel::brownian();
    const GramFactor f = gram_factor(bm, TimeGrid({1.0, 4.0}));
    CHECK(f.jitter_applied == 0.0);
    CHECK(f.at(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f.at(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f.at(0, 1) == 0.0);
    CHECK(f.at(1, 1) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));

    // Single-point grid: L = [sigma(t)], even at sigma 0.
    const auto fbm = CovarianceModel::fractional_brownian(0.7);
    const GramFactor single = gram_factor(fbm, TimeGrid({2.0}));
    CHECK(single.at(0, 0) == doctest::Approx(fbm.sigma(2.0)).epsilon(1e-15));
    CHECK(gram_factor(bm, TimeGrid({0.0})).at(0, 0) == 0.0);

    // Grid written as [1, 1+1e-16] collapses to a duplicate time: the Gram
    // is exactly singular and must go down the jitter path.
    const auto fbm_half = CovarianceModel::fractional_brownian(0.5);
    const GramFactor jittered = gram_factor(fbm_half, TimeGrid({1.0, 1.0 + 1e-16}));
    CHECK(jittered.jitter_applied > 0.0);

    // Not PSD even at the cap: an invalid tabulated "covariance".
    const auto bad = CovarianceModel::tabulated({1.0, 2.0}, {{1.0, 5.0}, {5.0, 1.0}});
    CHECK_THROWS_AS(gram_factor(bad, TimeGrid({1.0, 2.0})),
                    not_positive_definite_error);
}

TEST_CASE("gram factor reproduces the Gram matrix on random grids") {
    rng::Stream s{rng::stream_key(7, 7, 7)};
    const auto models = {CovarianceModel::fractional_brownian(0.3),
                         CovarianceModel::fractional_brownian(0.8),
                         CovarianceModel::brownian(),
                         CovarianceModel::ornstein_uhlenbeck(0.5)};
    for (const auto& model : models) {
        for (int rep = 0; rep < 8; ++rep) {
            const int m = 2 + static_cast<int>(s.next_uniform() * 30);
            std::vector<double> times;
            double t = 0.05 + s.next_uniform();
            for (int i = 0; i < m; ++i) {
                times.push_back(t);
                t += 0.01 + s.next_uniform();
            }
            const TimeGrid grid(times);
            const GramFactor f = gram_factor(model, grid);
            double gram_max = 0.0, err_max = 0.0;
            for (int i = 0; i < m; ++i) {
                for (int j = 0; j < m; ++j) {
                    const double gram = model.evaluate(times[i], times[j]);
                    double ll = 0.0;
                    for (int k = 0; k <= std::min(i, j); ++k) {
                        ll += f.at(i, k) * f.at(j, k);
                    }
                    gram_max = std::max(gram_max, std::fabs(gram));
                    err_max = std::max(err_max, std::fabs(ll - gram));
                }
            }
            CHECK(err_max <= 1e-8 * gram_max + f.jitter_applied);
            for (int i = 0; i < m; ++i) CHECK(f.at(i, i) >= 0.0);
        }
    }
}
