#pragma once
#include <Eigen/Dense>
#include <vector>

#include "csde/dictionary.hpp"

namespace csde {

struct ErrorReport {
    double l1 = 0.0;
    double tv = 0.0;
    bool support_exact = false;
    double precision = 1.0;
    double recall = 1.0;
};

struct SupportMetrics {
    bool exact = false;
    double precision = 1.0; // |hat ∩ star| / |hat|, 1 when hat is empty
    double recall = 1.0;    // |hat ∩ star| / |star|, 1 when star is empty
};

// sum_j |a_j - b_j|
double l1_error(const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& beta_star);

/**
 * Total variation distance between the two mixtures h_a and h_b.
 *
 * Continuous dictionaries: the integration range is
 * [min mu_j - 8 sigma_max, max mu_j + 8 sigma_max] cut into a 20,001-point
 * grid; each cell is integrated exactly through Gaussian CDF differences,
 * with sign changes of the difference located by bisection, so the value is
 * quadrature-error-free (grid refinement only re-buckets the same integral).
 * Discrete dictionaries: sum_k |h_a(k) - h_b(k)| under the tail rule.
 */
double tv_error(const Dictionary& dict, const Eigen::VectorXd& beta_a,
                const Eigen::VectorXd& beta_b, int grid_points = 20001);

SupportMetrics support_metrics(const std::vector<int>& support_hat,
                               const std::vector<int>& support_star);

ErrorReport error_report(const Dictionary& dict, const Eigen::VectorXd& beta_hat,
                         const Eigen::VectorXd& beta_star, int grid_points = 20001);

} // namespace csde
