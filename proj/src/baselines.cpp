#include "csde/baselines.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace csde {

Eigen::VectorXd em_fit(const std::vector<double>& sample, const Dictionary& dict,
                       const EmConfig& config) {
    const int n = static_cast<int>(sample.size());
    const int W = static_cast<int>(dict.atoms.size());
    if (n == 0) throw std::invalid_argument("em_fit: empty sample");

    Eigen::VectorXd p;
    if (config.init.size() == 0) {
        p = Eigen::VectorXd::Constant(W, 1.0 / W);
    } else {
        if (config.init.size() != W)
            throw std::invalid_argument("em_fit: init length does not match dictionary");
        if (config.init.minCoeff() < 0.0 || std::abs(config.init.sum() - 1.0) > 1e-12)
            throw std::invalid_argument("em_fit: init must be a probability vector");
        p = config.init;
    }

    // Component likelihoods are fixed; only the weights move.
    Eigen::MatrixXd f(n, W);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < W; ++j) f(i, j) = evaluate(dict.atoms[j], sample[i]);

    double prev_ll = -std::numeric_limits<double>::infinity();
    for (int it = 0; it < config.max_iter; ++it) {
        Eigen::VectorXd mix = f * p;
        if (mix.minCoeff() <= 0.0)
            throw std::domain_error("em_fit: sample point with zero likelihood under all components");
        const double ll = mix.array().log().sum();
        assert(ll >= prev_ll - 1e-8 * (1.0 + std::abs(prev_ll)));
        prev_ll = ll;

        // p_next_j = (1/n) sum_i p_j f_ij / mix_i
        Eigen::VectorXd next =
            p.array() * (f.transpose() * mix.cwiseInverse()).array() / n;
        const double change = (next - p).cwiseAbs().maxCoeff();
        p = next;
        if (change < config.xi) break;
    }
    (void)prev_ll;
    return p;
}

} // namespace csde
