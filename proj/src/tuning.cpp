#include "csde/tuning.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "csde/rng.hpp"

namespace csde {

namespace {
// Golden-section minimization on [lo, hi] to interval width xi.  Ties keep the
// left subinterval: the score surface is flat where the penalty has killed both
// half-fits, and drifting right there would end in the degenerate region.
double golden_min(const std::function<double(double)>& f, double lo, double hi, double xi) {
    constexpr double kInvPhi = 0.6180339887498948482;
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xi) {
        if (fc <= fd) {
            b = d;
            d = c; fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d; fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}
} // namespace

std::pair<std::vector<double>, std::vector<double>> cv_split(const std::vector<double>& sample,
                                                             std::uint64_t seed) {
    const std::size_t n = sample.size();
    if (n < 2) throw std::invalid_argument("cv_split: need n >= 2");
    Rng rng(seed);
    const auto idx = rng.permutation(n);
    const std::size_t half = n / 2;
    std::vector<double> first, second;
    first.reserve(half);
    second.reserve(n - half);
    for (std::size_t i = 0; i < n; ++i)
        (i < half ? first : second).push_back(sample[idx[i]]);
    return {std::move(first), std::move(second)};
}

double cv_score(double lambda1, double lambda2, const std::vector<double>& sample,
                const Dictionary& dict, Variant variant, std::uint64_t seed) {
    const auto [h1, h2] = cv_split(sample, seed);
    const GramMatrix g = gram(dict);
    const FitResult f1 = fit_variant(variant, h1, dict, g, lambda1, lambda2);
    const FitResult f2 = fit_variant(variant, h2, dict, g, lambda1, lambda2);
    if (f1.support.empty() && f2.support.empty())
        return std::numeric_limits<double>::infinity();
    const Eigen::VectorXd d = f1.beta_hat - f2.beta_hat;
    return d.dot(g.entries * d);
}

TuneResult tune(const TuneConfig& config,
                const std::function<double(double, double)>& score) {
    if (config.lambda1_range.first < 0.0 || config.lambda2_range.first < 0.0 ||
        config.lambda1_range.second <= config.lambda1_range.first ||
        config.lambda2_range.second <= config.lambda2_range.first)
        throw std::invalid_argument("tune: ranges need 0 <= lo < hi");
    if (!(config.xi > 0.0)) throw std::invalid_argument("tune: xi must be positive");

    double l1 = 0.5 * (config.lambda1_range.first + config.lambda1_range.second);
    double l2 = 0.5 * (config.lambda2_range.first + config.lambda2_range.second);
    TuneResult best{l1, l2, score(l1, l2), false};

    auto consider = [&](double a, double b) {
        const double s = score(a, b);
        if (s < best.score) best = TuneResult{a, b, s, best.converged};
        return s;
    };

    bool converged = false;
    for (int round = 0; round < config.max_rounds && !converged; ++round) {
        const double nl1 = golden_min([&](double t) { return consider(t, l2); },
                                      config.lambda1_range.first, config.lambda1_range.second,
                                      config.xi);
        consider(nl1, l2);
        const double nl2 = golden_min([&](double t) { return consider(nl1, t); },
                                      config.lambda2_range.first, config.lambda2_range.second,
                                      config.xi);
        consider(nl1, nl2);
        converged = std::abs(nl1 - l1) <= config.xi && std::abs(nl2 - l2) <= config.xi;
        l1 = nl1;
        l2 = nl2;
    }
    best.converged = converged;
    return best;
}

TuneResult tune(const TuneConfig& config, const std::vector<double>& sample,
                const Dictionary& dict, Variant variant) {
    const auto [h1, h2] = cv_split(sample, config.seed);
    const GramMatrix g = gram(dict);
    auto score = [&, g](double a, double b) -> double {
        const FitResult f1 = fit_variant(variant, h1, dict, g, a, b);
        const FitResult f2 = fit_variant(variant, h2, dict, g, a, b);
        if (f1.support.empty() && f2.support.empty())
            return std::numeric_limits<double>::infinity();
        const Eigen::VectorXd d = f1.beta_hat - f2.beta_hat;
        return d.dot(g.entries * d);
    };
    return tune(config, score);
}

} // namespace csde
