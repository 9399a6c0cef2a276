#pragma once
#include <Eigen/Dense>
#include <string>

#include "csde/dictionary.hpp"

namespace csde {

/**
 * Concentration-derived penalty weights:
 *   omega_tilde_k = 2*sqrt(2) * L_k * v(delta/2),  v(d) = sqrt(log(W/d)/n),
 *   omega_k       = omega_tilde_k + c*B.
 */
struct WeightSpec {
    int n = 0;
    int W = 0;
    double delta = 0.0;
    double c = 0.0;
    double B = 1.0;
    double v_value = 0.0;
    Eigen::VectorXd omega;
    Eigen::VectorXd omega_tilde;
};

// The raw per-coordinate penalty the solver consumes: omega vector plus the
// ridge coefficient.  Variant mappings produce these directly.
struct PenaltySpec {
    Eigen::VectorXd omega;
    double c = 0.0;
};

// v(delta) = sqrt(log(W/delta)/n).  Callers pass delta/2 or delta/(2W) as needed.
double v(double delta, int n, int W);

WeightSpec csde_weights(const Dictionary& dict, int n, double delta, double c, double B);

// Theory-prescribed ridge constant: min_j omega_tilde_j / B.
double theorem1_c(const Eigen::VectorXd& omega_tilde, double B);

// L_j estimate for discrete families via the mean/median/mode chain of the
// tuning section: evaluates each atom's pmf at the integer nearest the sample mean.
Eigen::VectorXd discrete_sup_norm_estimate(const std::vector<double>& sample,
                                           const Dictionary& dict);

enum class Variant { lasso, enet, adalasso, csde };

Variant variant_from_string(const std::string& name);
std::string to_string(Variant v);

// The single-knob mapping used by the simulation harness:
//   lasso:    omega = lambda1 (flat), c = 0
//   enet:     omega = lambda1 (flat), c = lambda2
//   adalasso: omega = lambda1 * L_k / max_j L_j, c = 0
//   csde:     omega = lambda1 * L_k / max_j L_j + lambda2 * B, c = lambda2
PenaltySpec variant_penalty(Variant variant, const Dictionary& dict,
                            double lambda1, double lambda2, double B = 1.0);

} // namespace csde
