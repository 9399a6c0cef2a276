#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "csde/rng.hpp"
#include "csde/tuning.hpp"
#include "doctest.h"

using namespace csde;

TEST_CASE("cv_split partitions into reproducible halves") {
    const std::vector<double> sample{10, 20, 30, 40};
    const auto [a, b] = cv_split(sample, 7);
    CHECK(a.size() == 2);
    CHECK(b.size() == 2);
    std::vector<double> all = a;
    all.insert(all.end(), b.begin(), b.end());
    std::sort(all.begin(), all.end());
    CHECK(all == sample);

    const auto [a2, b2] = cv_split(sample, 7);
    CHECK(a == a2);
    CHECK(b == b2);

    const auto [c, d] = cv_split({1, 2, 3, 4, 5}, 3);
    CHECK(c.size() == 2);
    CHECK(d.size() == 3);

    CHECK_THROWS_AS(cv_split({1.0}, 0), std::invalid_argument);
}

TEST_CASE("cv score vanishes when both halves carry the same signal") {
    // every observation identical, so any split yields identical fits
    const Dictionary dict({BaseDensity::tabulated({{1, 1.0}})});
    const std::vector<double> sample(20, 1.0);
    CHECK(cv_score(0.0, 0.0, sample, dict, Variant::lasso, 5) == 0.0);
}

TEST_CASE("cv score of a split signal is the squared density distance") {
    // orthonormal point masses; each half fits exactly its own moments
    const Dictionary dict(
        {BaseDensity::tabulated({{0, 1.0}}), BaseDensity::tabulated({{5, 1.0}})});
    std::vector<double> sample;
    for (int i = 0; i < 10; ++i) sample.push_back(0.0);
    for (int i = 0; i < 10; ++i) sample.push_back(5.0);
    const double score = cv_score(0.0, 0.0, sample, dict, Variant::lasso, 11);
    // halves disagree only through their 0/5 mix; score = 2 (p - q)^2 where p, q
    // are the halves' frequencies of the point 0
    const auto [h1, h2] = cv_split(sample, 11);
    const double p = std::count(h1.begin(), h1.end(), 0.0) / double(h1.size());
    const double q = std::count(h2.begin(), h2.end(), 0.0) / double(h2.size());
    CHECK(score == doctest::Approx(2.0 * (p - q) * (p - q)).epsilon(1e-12));
}

TEST_CASE("a penalty large enough to zero both halves scores infinity") {
    const Dictionary dict({BaseDensity::gaussian(0, 1)});
    Rng rng(97);
    std::vector<double> sample(40);
    for (double& x : sample) x = rng.normal();
    const double degenerate = cv_score(5.0, 0.0, sample, dict, Variant::lasso, 13);
    CHECK(std::isinf(degenerate));
    const double healthy = cv_score(0.01, 0.0, sample, dict, Variant::lasso, 13);
    CHECK(std::isfinite(healthy));
}

TEST_CASE("search on a constant surface keeps the midpoints") {
    TuneConfig cfg;
    const TuneResult r = tune(cfg, [](double, double) { return 3.5; });
    CHECK(r.lambda1 == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r.lambda2 == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(r.score == 3.5);
    CHECK(r.converged);
}

TEST_CASE("search recovers the minimum of a quadratic bowl") {
    TuneConfig cfg;
    const TuneResult r = tune(cfg, [](double l1, double l2) {
        return (l1 - 0.05) * (l1 - 0.05) + (l2 - 0.01) * (l2 - 0.01);
    });
    CHECK(r.lambda1 == doctest::Approx(0.05).scale(1).epsilon(2e-3));
    CHECK(r.lambda2 == doctest::Approx(0.01).scale(1).epsilon(2e-3));
    CHECK(r.converged);
}

TEST_CASE("selected parameters never leave the configured ranges") {
    Rng rng(103);
    for (int trial = 0; trial < 10; ++trial) {
        TuneConfig cfg;
        cfg.lambda1_range = {0.1, 0.3};
        cfg.lambda2_range = {0.02, 0.04};
        const double t1 = 0.5 * rng.uniform(), t2 = 0.1 * rng.uniform();
        const TuneResult r = tune(cfg, [&](double l1, double l2) {
            return (l1 - t1) * (l1 - t1) + (l2 - t2) * (l2 - t2);
        });
        CHECK(r.lambda1 >= cfg.lambda1_range.first);
        CHECK(r.lambda1 <= cfg.lambda1_range.second);
        CHECK(r.lambda2 >= cfg.lambda2_range.first);
        CHECK(r.lambda2 <= cfg.lambda2_range.second);
    }
}

TEST_CASE("invalid configurations are rejected") {
    TuneConfig bad;
    bad.lambda1_range = {0.5, 0.5};
    CHECK_THROWS_AS(tune(bad, [](double, double) { return 0.0; }), std::invalid_argument);
    TuneConfig negative;
    negative.lambda2_range = {-0.1, 0.1};
    CHECK_THROWS_AS(tune(negative, [](double, double) { return 0.0; }), std::invalid_argument);
    TuneConfig zeroxi;
    zeroxi.xi = 0.0;
    CHECK_THROWS_AS(tune(zeroxi, [](double, double) { return 0.0; }), std::invalid_argument);
}

TEST_CASE("full search on data avoids the all-zero shrinkage regime") {
    const Dictionary dict({BaseDensity::gaussian(0, 1)});
    Rng rng(107);
    std::vector<double> sample(60);
    for (double& x : sample) x = rng.normal();
    TuneConfig cfg;
    cfg.lambda1_range = {0.0, 5.0}; // the top of this range zeroes every fit
    cfg.seed = 17;
    const TuneResult r = tune(cfg, sample, dict, Variant::csde);
    CHECK(r.lambda1 < 5.0);
    CHECK(std::isfinite(r.score));
}
