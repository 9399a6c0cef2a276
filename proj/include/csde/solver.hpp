#pragma once
#include <Eigen/Dense>
#include <vector>

#include "csde/dictionary.hpp"
#include "csde/weights.hpp"

namespace csde {

/**
 * The penalized L2-distance fit
 *   argmin_beta  -2 beta_tilde' beta + beta' psi beta
 *                + 2 sum_k omega_k |beta_k| + c sum_k beta_k^2
 * subject to beta >= 0 when nonneg is set (the default; the model class
 * consists of mixture weights).
 */
struct Problem {
    Eigen::VectorXd beta_tilde;
    Eigen::MatrixXd gram;
    Eigen::VectorXd omega;
    double c = 0.0;
    bool nonneg = true;
};

struct FitResult {
    Eigen::VectorXd beta_hat;
    std::vector<int> support;
    double objective = 0.0;
    Eigen::VectorXd kkt_residuals;
    int iterations = 0;
    bool converged = false;
};

struct FitOptions {
    int max_iter = 10000;
    double tol = 1e-8;
};

struct KktReport {
    double max_residual = 0.0;
    std::vector<int> violations;
};

// beta_tilde_j = (1/n) sum_i h_j(X_i).
Eigen::VectorXd empirical_moments(const Dictionary& dict, const std::vector<double>& sample);

// Cyclic coordinate descent with exact coordinate updates; stops when the
// largest coordinate change in a sweep falls below tol.  `converged` reflects
// a KKT check at tolerance 10*tol.
FitResult fit(const Problem& problem, const FitOptions& options = {});

// Closed-form solution for an identity Gram:
//   beta_j = (1 - omega_j/|beta_tilde_j|)_+ * beta_tilde_j / (1+c),
// clamped at zero under the nonnegativity constraint.
FitResult fit_orthogonal(const Eigen::VectorXd& beta_tilde, const Eigen::VectorXd& omega,
                         double c, bool nonneg = true);

// First-order optimality residuals.  With g_k = beta_tilde_k - (psi beta)_k - c beta_k:
// active k: |g_k - omega_k sign(beta_k)|; inactive k: max(0, g_k - omega_k) under
// the nonnegativity constraint (one-sided), max(0, |g_k| - omega_k) otherwise.
KktReport kkt_check(const FitResult& result, const Problem& problem, double tol);

// Builds the variant's penalty, computes empirical moments and delegates to fit.
FitResult fit_variant(Variant variant, const std::vector<double>& sample,
                      const Dictionary& dict, double lambda1, double lambda2,
                      const FitOptions& options = {});

// Same, with a precomputed Gram (replication harnesses reuse one Gram).
FitResult fit_variant(Variant variant, const std::vector<double>& sample,
                      const Dictionary& dict, const GramMatrix& g,
                      double lambda1, double lambda2, const FitOptions& options = {});

double objective_value(const Problem& problem, const Eigen::VectorXd& beta);

} // namespace csde
