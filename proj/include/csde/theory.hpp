#pragma once
#include <Eigen/Dense>
#include <vector>

#include "csde/dictionary.hpp"
#include "csde/weights.hpp"

namespace csde {

/**
 * Diagnostic quantities for the oracle inequalities and support-recovery
 * results.  Bounds are returned raw (possibly vacuous); nothing is clamped.
 */
struct OracleDiagnostics {
    double H = 0.0;          // max_{j in I} omega_j / (v ||h_j||)
    double F = 0.0;          // max_j ||h_j|| / (2 sqrt(2) L_j)
    double rho_star = 0.0;   // cumulative local coherence of the support
    int W_beta = 0;          // support size
    double lambda_W = 0.0;   // smallest Gram eigenvalue
    double G = 0.0;          // sum_{j in I} L_j^2
    double G_star = 0.0;     // same at beta*
    double alpha_opt1 = 2.0;
    double alpha_opt2 = 2.0;
    double gamma_condition_lhs = 0.0;
    bool condition_a = false;
    bool condition_b = false;
    double bound_t1 = 0.0;
    double bound_t2 = 0.0;
    double bound_c1 = 0.0;
    double bound_c2 = 0.0;
};

struct ConditionCheck {
    double lhs = 0.0;
    bool holds = false;
};

struct OracleBound {
    double alpha_opt = 2.0;
    double rhs = 0.0;
};

// 12 F H rho* sqrt(W_beta) <= gamma
ConditionCheck coherence_condition_t1(double H, double F, double rho_star, int W_beta,
                                      double gamma);

// rhs(alpha) = (alpha+1)/(alpha-1) approx + 18 alpha^2/(alpha-1) H^2 v^2 W_beta,
// evaluated at alpha_opt1 = 1 + sqrt(1 + approx/(9 H^2 v^2 W_beta)).
OracleBound oracle_bound_t1(double approx_error, double H, double v_half_delta, int W_beta);

// rhs(alpha) = (alpha+1)/(alpha-1) approx + 576 alpha^2/(alpha-1) (G/lambda_W) v^2,
// at alpha_opt2 = 1 + sqrt(1 + approx/(288 (G/lambda_W) v^2)).
OracleBound oracle_bound_t2(double approx_error, double G, double lambda_W,
                            double v_half_delta);

// 72 sqrt(2) v(delta/2W) W* (L + L_min)^2 / (L_min (1 - gamma))
double corollary1_bound(double v_dw, int W_star, double L, double L_min, double gamma);

// 288 sqrt(2) v(delta/2W) G* / (L_min lambda_W)
double corollary2_bound(double v_dw, double G_star, double L_min, double lambda_W);

// rho*(beta*) <= L L_min lambda_W / (288 G*), non-strict
bool check_condition_a(double rho_star_beta_star, double L, double L_min, double lambda_W,
                       double G_star);

// min_{j in I*} beta*_j >= 4 sqrt(2) v(delta/2W) L; empty support holds by convention
bool check_condition_b(const Eigen::VectorXd& beta_star, double v_dw, double L);

// 1 - (4W (delta/2W^2)^{(1-eps*)^2} + 2 delta); may be negative (vacuous)
double theorem3_probability(int W, double delta, double eps_star);

inline bool theorem3_vacuous(double probability) { return probability <= 0.0; }

// A mixture law: coefficients over a dictionary.
struct MixtureLaw {
    const Dictionary& dict;
    Eigen::VectorXd coef;
};

// eps_k = |E h_k(X) - E h_k(Z)| with both laws given as dictionary mixtures.
double contamination_bias(const BaseDensity& base, const MixtureLaw& clean,
                          const MixtureLaw& contaminated);

// Fraction of replications whose realized LHS is within its bound.
double empirical_coverage(const std::vector<double>& lhs_values,
                          const std::vector<double>& bound_values);

// Full diagnostics for a dictionary + candidate coefficient vector.
OracleDiagnostics oracle_diagnostics(const Dictionary& dict, const GramMatrix& g,
                                     const Eigen::VectorXd& beta,
                                     const Eigen::VectorXd& beta_star,
                                     const WeightSpec& weights, double approx_error,
                                     double gamma);

} // namespace csde
