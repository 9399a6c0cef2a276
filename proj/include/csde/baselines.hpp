#pragma once
#include <Eigen/Dense>
#include <vector>

#include "csde/dictionary.hpp"

namespace csde {

/**
 * EM for mixture weights with known component parameters.  An empty init
 * means uniform 1/W; otherwise init must be a probability vector.
 */
struct EmConfig {
    Eigen::VectorXd init;
    double xi = 1e-4;
    int max_iter = 10000;
};

// Iterates responsibilities w_ij = p_j f_j(x_i) / sum_s p_s f_s(x_i) and
// p_j <- sum_i w_ij / n until the sup-norm change drops below xi.
Eigen::VectorXd em_fit(const std::vector<double>& sample, const Dictionary& dict,
                       const EmConfig& config = EmConfig{});

} // namespace csde
