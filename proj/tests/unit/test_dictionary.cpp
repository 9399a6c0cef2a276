#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "csde/dictionary.hpp"
#include "csde/rng.hpp"
#include "doctest.h"

using namespace csde;

namespace {

// Composite Simpson quadrature, used as the independent oracle for the
// closed-form Gaussian inner products.
double simpson(const std::function<double(double)>& f, double a, double b, int cells) {
    const double h = (b - a) / cells;
    double s = f(a) + f(b);
    for (int i = 1; i < cells; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

double quad_inner(const BaseDensity& a, const BaseDensity& b) {
    const double lo = std::min(a.mu - 10 * a.sigma, b.mu - 10 * b.sigma);
    const double hi = std::max(a.mu + 10 * a.sigma, b.mu + 10 * b.sigma);
    return simpson([&](double x) { return evaluate(a, x) * evaluate(b, x); }, lo, hi, 20000);
}

BaseDensity point_mass(long long k) { return BaseDensity::tabulated({{k, 1.0}}); }

} // namespace

TEST_CASE("pointwise evaluation matches the normal pdf and Poisson pmf") {
    CHECK(evaluate(BaseDensity::gaussian(0, 1), 0.0) ==
          doctest::Approx(0.3989422804014327).epsilon(1e-14));
    // density mode equals 1/(sigma sqrt(2 pi))
    CHECK(evaluate(BaseDensity::gaussian(3, 0.25), 3.0) ==
          doctest::Approx(1.5957691216057308).epsilon(1e-14));
    CHECK(evaluate(BaseDensity::poisson(1), 0.0) ==
          doctest::Approx(0.36787944117144233).epsilon(1e-14));
    CHECK(evaluate(BaseDensity::poisson(1), -3.0) == 0.0);
    CHECK_THROWS_AS(evaluate(BaseDensity::poisson(1), 0.5), std::invalid_argument);
}

TEST_CASE("tabulated atoms evaluate to zero outside their support") {
    const BaseDensity t = BaseDensity::tabulated({{2, 0.5}, {4, 0.5}});
    CHECK(evaluate(t, 2.0) == 0.5);
    CHECK(evaluate(t, 3.0) == 0.0);
}

TEST_CASE("sup norms sit at the mode") {
    CHECK(sup_norm(BaseDensity::gaussian(0, 1)) ==
          doctest::Approx(0.3989422804014327).epsilon(1e-14));
    CHECK(sup_norm(BaseDensity::poisson(0.5)) ==
          doctest::Approx(0.60653065971263342).epsilon(1e-14));
    // lambda = 1 ties k = 0 and k = 1 at e^{-1}
    CHECK(sup_norm(BaseDensity::poisson(1)) ==
          doctest::Approx(0.36787944117144233).epsilon(1e-14));
}

TEST_CASE("sup norm dominates a dense grid scan of the atom") {
    const BaseDensity g = BaseDensity::gaussian(2.0, 0.7);
    const double Lg = sup_norm(g);
    for (int i = 0; i <= 10000; ++i) {
        const double x = (g.mu - 8 * g.sigma) + i * (16 * g.sigma / 10000);
        CHECK(evaluate(g, x) <= Lg + 1e-15);
    }
    const BaseDensity p = BaseDensity::poisson(7.3);
    const double Lp = sup_norm(p);
    for (long long k = 0; k <= 207; ++k) CHECK(evaluate(p, double(k)) <= Lp + 1e-15);
    const BaseDensity nb = BaseDensity::neg_binomial_mean(6.0, 3.0);
    const double Lnb = sup_norm(nb);
    for (long long k = 0; k <= 202; ++k) CHECK(evaluate(nb, double(k)) <= Lnb + 1e-15);
}

TEST_CASE("L2 norms: closed forms and the point-mass case") {
    CHECK(l2_norm(BaseDensity::gaussian(0, 1)) ==
          doctest::Approx(0.53112596601359841).epsilon(1e-14));
    CHECK(l2_norm(BaseDensity::gaussian(0, 2)) ==
          doctest::Approx(0.37556277223247125).epsilon(1e-14));
    CHECK(l2_norm(point_mass(0)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("inner products: closed forms, symmetry, and the norm identity") {
    const BaseDensity g0 = BaseDensity::gaussian(0, 1);
    const BaseDensity g10 = BaseDensity::gaussian(10, 1);
    CHECK(inner_product(g0, g0) == doctest::Approx(0.28209479177387814).epsilon(1e-14));
    CHECK(inner_product(g0, g10) == doctest::Approx(3.917716632754334e-12).epsilon(1e-12));
    CHECK(inner_product(g0, g10) == inner_product(g10, g0));
    for (const BaseDensity& h :
         {BaseDensity::gaussian(1.5, 0.6), BaseDensity::poisson(2.5),
          BaseDensity::neg_binomial_mean(6.0, 2.0)}) {
        const double nrm = l2_norm(h);
        CHECK(inner_product(h, h) == doctest::Approx(nrm * nrm).epsilon(1e-12));
    }
    CHECK_THROWS_AS(inner_product(g0, BaseDensity::poisson(1)), std::invalid_argument);
}

TEST_CASE("closed-form Gaussian inner products agree with quadrature") {
    const std::vector<std::pair<BaseDensity, BaseDensity>> pairs = {
        {BaseDensity::gaussian(0, 1), BaseDensity::gaussian(0.5, 1)},
        {BaseDensity::gaussian(0.3, 0.7), BaseDensity::gaussian(1.1, 1.3)},
        {BaseDensity::gaussian(-2, 0.4), BaseDensity::gaussian(1, 2.5)},
    };
    for (const auto& [a, b] : pairs) {
        const double closed = inner_product(a, b);
        CHECK(closed == doctest::Approx(quad_inner(a, b)).epsilon(1e-9));
    }
}

TEST_CASE("discrete inner products converge under the truncation rule") {
    const BaseDensity p3 = BaseDensity::poisson(3);
    const BaseDensity p5 = BaseDensity::poisson(5);
    // direct sums at two truncation depths bracket the library value
    auto direct = [&](int kmax) {
        double s = 0.0;
        for (int k = 0; k <= kmax; ++k) s += evaluate(p3, k) * evaluate(p5, k);
        return s;
    };
    const double s200 = direct(200);
    const double s400 = direct(400);
    CHECK(std::abs(s400 - s200) < 1e-12);
    CHECK(inner_product(p3, p5) == doctest::Approx(0.1131321688605554).epsilon(1e-12));
    CHECK(inner_product(p3, p5) == doctest::Approx(s400).epsilon(1e-10));
}

TEST_CASE("pmf tables carry nearly all mass") {
    for (const BaseDensity& b : {BaseDensity::poisson(4.0), BaseDensity::neg_binomial_mean(6, 2)}) {
        const auto t = pmf_table(b);
        double mass = 0.0;
        for (double x : t) mass += x;
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(t[0] == doctest::Approx(evaluate(b, 0.0)).epsilon(1e-14));
    }
    CHECK_THROWS_AS(pmf_table(BaseDensity::gaussian(0, 1)), std::invalid_argument);
}

TEST_CASE("dictionary construction validates atoms") {
    CHECK_THROWS_AS(Dictionary(std::vector<BaseDensity>{}), std::invalid_argument);
    CHECK_THROWS_AS(
        Dictionary({BaseDensity::gaussian(0, 1), BaseDensity::poisson(1)}),
        std::invalid_argument);
    // an all-zero tabulated atom has zero L2 norm
    CHECK_THROWS_AS(Dictionary({BaseDensity::tabulated({{0, 0.0}})}), std::invalid_argument);
    CHECK_THROWS_AS(BaseDensity::gaussian(0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(BaseDensity::poisson(0.0), std::invalid_argument);
    CHECK_THROWS_AS(BaseDensity::neg_binomial(1.0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(BaseDensity::tabulated({{0, -0.25}}), std::invalid_argument);
}

TEST_CASE("Gram matrices: identity, singleton, and near-grid values") {
    const Dictionary ortho({point_mass(0), point_mass(5)});
    const GramMatrix gi = gram(ortho);
    CHECK(gi.entries(0, 0) == doctest::Approx(1.0));
    CHECK(gi.entries(1, 1) == doctest::Approx(1.0));
    CHECK(gi.entries(0, 1) == 0.0);

    const Dictionary single({BaseDensity::gaussian(0, 1)});
    CHECK(gram(single).entries(0, 0) == doctest::Approx(0.28209479177387814).epsilon(1e-14));

    Eigen::VectorXd sigma(1);
    sigma << 1.0;
    const Dictionary grid = grid_gaussian(2, 0.5, sigma);
    const GramMatrix gg = gram(grid);
    CHECK(gg.entries(0, 1) == doctest::Approx(0.26500353234402857).epsilon(1e-14));
    CHECK(gg.entries(0, 1) == gg.entries(1, 0));
}

TEST_CASE("random Gaussian grids give symmetric nonnegative-definite Grams") {
    Rng rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        const int W = 2 + static_cast<int>(rng.below(6));
        std::vector<BaseDensity> atoms;
        for (int j = 0; j < W; ++j)
            atoms.push_back(BaseDensity::gaussian(4.0 * rng.uniform(), 0.2 + 2.0 * rng.uniform()));
        const GramMatrix g = gram(Dictionary(std::move(atoms)));
        CHECK((g.entries - g.entries.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(min_eigenvalue(g) >= -1e-10);
        for (int j = 0; j < W; ++j) CHECK(g.entries(j, j) > 0.0);
    }
}

TEST_CASE("coherence statistics over supports") {
    GramMatrix identity{Eigen::MatrixXd::Identity(3, 3)};
    const CoherenceStats si = coherence_stats(identity, {0, 2});
    CHECK(si.rho_max == 0.0);
    CHECK(si.rho_star == 0.0);
    CHECK(si.sparse_index == 0);

    GramMatrix g2{Eigen::MatrixXd(2, 2)};
    g2.entries << 1.0, 0.5, 0.5, 1.0;
    const CoherenceStats s2 = coherence_stats(g2, {0});
    CHECK(s2.rho_max == doctest::Approx(0.5));
    CHECK(s2.rho_star == doctest::Approx(0.5));
    CHECK(s2.sparse_index == 1);

    const CoherenceStats empty = coherence_stats(g2, {});
    CHECK(empty.rho_max == 0.0);
    CHECK(empty.rho_star == 0.0);
    CHECK(empty.sparse_index == 1);

    CHECK_THROWS_AS(coherence_stats(g2, {7}), std::out_of_range);
}

TEST_CASE("cumulative coherence counts each support row against later columns") {
    GramMatrix g{Eigen::MatrixXd(3, 3)};
    g.entries << 1.0, 0.2, 0.1, 0.2, 1.0, 0.3, 0.1, 0.3, 1.0;
    CHECK(coherence_stats(g, {0}).rho_star == doctest::Approx(0.3));
    CHECK(coherence_stats(g, {1}).rho_star == doctest::Approx(0.3));
    CHECK(coherence_stats(g, {0, 1}).rho_star == doctest::Approx(0.6));
    CHECK(coherence_stats(g, {0, 1}).rho_max == doctest::Approx(0.3));
}

TEST_CASE("minimum eigenvalue of small matrices") {
    GramMatrix id{Eigen::MatrixXd::Identity(4, 4)};
    CHECK(min_eigenvalue(id) == doctest::Approx(1.0).epsilon(1e-12));
    GramMatrix g{Eigen::MatrixXd(2, 2)};
    g.entries << 1.0, 0.5, 0.5, 1.0;
    CHECK(min_eigenvalue(g) == doctest::Approx(0.5).epsilon(1e-12));
    GramMatrix rank1{Eigen::MatrixXd(2, 2)};
    rank1.entries << 1.0, 1.0, 1.0, 1.0;
    CHECK(min_eigenvalue(rank1) == doctest::Approx(0.0).scale(1).epsilon(1e-12));
}

TEST_CASE("normalize rescales to unit norms and records the inverse scales") {
    const Dictionary dict({BaseDensity::gaussian(0, 1), BaseDensity::gaussian(2, 1)});
    const NormalizeResult res = normalize(dict);
    CHECK(res.dict.normalized);
    for (int j = 0; j < res.dict.size(); ++j)
        CHECK(res.dict.l2_norms[j] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(res.scales[0] == doctest::Approx(1.8827925275534296).epsilon(1e-12));
    // sup norms scale together with the atoms
    CHECK(res.dict.sup_norms[0] ==
          doctest::Approx(dict.sup_norms[0] * res.scales[0]).epsilon(1e-12));

    const NormalizeResult twice = normalize(res.dict);
    for (int j = 0; j < twice.dict.size(); ++j) {
        CHECK(twice.scales[j] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(twice.dict.atoms[j].scale ==
              doctest::Approx(res.dict.atoms[j].scale).epsilon(1e-12));
    }
}

TEST_CASE("grid constructors lay out means and rates as a*j") {
    Eigen::VectorXd sigma(1);
    sigma << 0.8;
    const Dictionary gg = grid_gaussian(4, 0.5, sigma);
    REQUIRE(gg.size() == 4);
    for (int j = 0; j < 4; ++j) {
        CHECK(gg.atoms[j].mu == doctest::Approx(0.5 * (j + 1)));
        CHECK(gg.atoms[j].sigma == 0.8);
    }
    Eigen::VectorXd bad(2);
    bad << 1.0, 1.0;
    CHECK_THROWS_AS(grid_gaussian(4, 0.5, bad), std::invalid_argument);

    const Dictionary gp = grid_poisson(3, 0.1);
    REQUIRE(gp.size() == 3);
    for (int j = 0; j < 3; ++j) CHECK(gp.atoms[j].lambda == doctest::Approx(0.1 * (j + 1)));
}
