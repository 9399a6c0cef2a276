#include "csde/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace csde {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<int> nonzero_indices(const Eigen::VectorXd& beta) {
    std::vector<int> idx;
    for (int j = 0; j < beta.size(); ++j)
        if (beta[j] != 0.0) idx.push_back(j);
    return idx;
}

// Both oracle bounds share the shape
//   rhs(alpha) = (alpha+1)/(alpha-1)*approx + quad*alpha^2/(alpha-1),
// minimized at alpha = 1 + sqrt(1 + 2*approx/quad).
double bound_value(double alpha, double approx, double quad) {
    return (alpha + 1.0) / (alpha - 1.0) * approx +
           quad * alpha * alpha / (alpha - 1.0);
}

} // namespace

ConditionCheck coherence_condition_t1(double H, double F, double rho_star, int W_beta,
                                      double gamma) {
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw std::invalid_argument("coherence_condition_t1: gamma must lie in (0,1]");
    ConditionCheck out;
    out.lhs = 12.0 * F * H * rho_star * std::sqrt(static_cast<double>(W_beta));
    out.holds = out.lhs <= gamma;
    return out;
}

OracleBound oracle_bound_t1(double approx_error, double H, double v_half_delta,
                            int W_beta) {
    if (approx_error < 0.0)
        throw std::domain_error("oracle_bound_t1: negative approximation error");
    if (W_beta < 1 || H <= 0.0 || v_half_delta <= 0.0)
        throw std::invalid_argument("oracle_bound_t1: requires W_beta >= 1, H > 0, v > 0");
    const double quad = 18.0 * H * H * v_half_delta * v_half_delta * W_beta;
    OracleBound out;
    out.alpha_opt = 1.0 + std::sqrt(1.0 + approx_error / (quad / 2.0));
    out.rhs = bound_value(out.alpha_opt, approx_error, quad);
    return out;
}

OracleBound oracle_bound_t2(double approx_error, double G, double lambda_W,
                            double v_half_delta) {
    if (approx_error < 0.0)
        throw std::domain_error("oracle_bound_t2: negative approximation error");
    if (lambda_W <= 0.0)
        throw std::invalid_argument("oracle_bound_t2: smallest Gram eigenvalue must be positive");
    const double quad = 576.0 * (G / lambda_W) * v_half_delta * v_half_delta;
    OracleBound out;
    if (quad == 0.0) {
        // Empty support: the stochastic term vanishes and the infimum over
        // alpha is the approximation error alone.
        out.alpha_opt = kInf;
        out.rhs = approx_error;
        return out;
    }
    out.alpha_opt = 1.0 + std::sqrt(1.0 + approx_error / (quad / 2.0));
    out.rhs = bound_value(out.alpha_opt, approx_error, quad);
    return out;
}

double corollary1_bound(double v_dw, int W_star, double L, double L_min, double gamma) {
    if (gamma >= 1.0 || gamma <= 0.0)
        throw std::invalid_argument("corollary1_bound: gamma must lie in (0,1)");
    if (L_min <= 0.0 || L < L_min)
        throw std::invalid_argument("corollary1_bound: requires L >= L_min > 0");
    const double s = L + L_min;
    return 72.0 * kSqrt2 * v_dw * W_star * s * s / (L_min * (1.0 - gamma));
}

double corollary2_bound(double v_dw, double G_star, double L_min, double lambda_W) {
    if (lambda_W <= 0.0 || L_min <= 0.0)
        throw std::invalid_argument("corollary2_bound: requires lambda_W > 0 and L_min > 0");
    return 288.0 * kSqrt2 * v_dw * G_star / (L_min * lambda_W);
}

bool check_condition_a(double rho_star_beta_star, double L, double L_min, double lambda_W,
                       double G_star) {
    if (G_star <= 0.0) return true;
    return rho_star_beta_star <= L * L_min * lambda_W / (288.0 * G_star);
}

bool check_condition_b(const Eigen::VectorXd& beta_star, double v_dw, double L) {
    double min_signal = kInf;
    for (int j = 0; j < beta_star.size(); ++j)
        if (beta_star[j] != 0.0) min_signal = std::min(min_signal, std::abs(beta_star[j]));
    if (min_signal == kInf) return true;
    return min_signal >= 4.0 * kSqrt2 * v_dw * L;
}

double theorem3_probability(int W, double delta, double eps_star) {
    if (!(delta > 0.0 && delta < 0.5))
        throw std::invalid_argument("theorem3_probability: delta must lie in (0, 1/2)");
    if (W < 1) throw std::invalid_argument("theorem3_probability: W must be positive");
    if (!(eps_star >= 0.0 && eps_star < 1.0))
        throw std::invalid_argument("theorem3_probability: eps_star must lie in [0, 1)");
    const double e = (1.0 - eps_star) * (1.0 - eps_star);
    const double dW = static_cast<double>(W);
    return 1.0 - (4.0 * dW * std::pow(delta / (2.0 * dW * dW), e) + 2.0 * delta);
}

double contamination_bias(const BaseDensity& base, const MixtureLaw& clean,
                          const MixtureLaw& contaminated) {
    auto mean_of = [&](const MixtureLaw& law) {
        if (law.coef.size() != static_cast<Eigen::Index>(law.dict.atoms.size()))
            throw std::invalid_argument("contamination_bias: coefficient/dictionary mismatch");
        double m = 0.0;
        for (int j = 0; j < law.coef.size(); ++j)
            if (law.coef[j] != 0.0) m += law.coef[j] * inner_product(base, law.dict.atoms[j]);
        return m;
    };
    return std::abs(mean_of(clean) - mean_of(contaminated));
}

double empirical_coverage(const std::vector<double>& lhs_values,
                          const std::vector<double>& bound_values) {
    if (lhs_values.size() != bound_values.size())
        throw std::invalid_argument("empirical_coverage: length mismatch");
    if (lhs_values.empty()) return 1.0;
    std::size_t covered = 0;
    for (std::size_t i = 0; i < lhs_values.size(); ++i)
        if (lhs_values[i] <= bound_values[i]) ++covered;
    return static_cast<double>(covered) / static_cast<double>(lhs_values.size());
}

OracleDiagnostics oracle_diagnostics(const Dictionary& dict, const GramMatrix& g,
                                     const Eigen::VectorXd& beta,
                                     const Eigen::VectorXd& beta_star,
                                     const WeightSpec& weights, double approx_error,
                                     double gamma) {
    const int W = static_cast<int>(dict.atoms.size());
    if (beta.size() != W || beta_star.size() != W || g.size() != W)
        throw std::invalid_argument("oracle_diagnostics: dimension mismatch");
    if (weights.omega.size() != W)
        throw std::invalid_argument("oracle_diagnostics: weight vector mismatch");

    OracleDiagnostics d;
    const std::vector<int> I = nonzero_indices(beta);
    const std::vector<int> I_star = nonzero_indices(beta_star);
    d.W_beta = static_cast<int>(I.size());

    const double v_half = weights.v_value;
    for (int j : I) d.H = std::max(d.H, weights.omega[j] / (v_half * dict.l2_norms[j]));
    for (int j = 0; j < W; ++j)
        d.F = std::max(d.F, dict.l2_norms[j] / (2.0 * kSqrt2 * dict.sup_norms[j]));

    d.rho_star = coherence_stats(g, I).rho_star;
    d.lambda_W = min_eigenvalue(g);
    for (int j : I) d.G += dict.sup_norms[j] * dict.sup_norms[j];
    for (int j : I_star) d.G_star += dict.sup_norms[j] * dict.sup_norms[j];

    d.gamma_condition_lhs = coherence_condition_t1(d.H, d.F, d.rho_star, d.W_beta, gamma).lhs;

    if (d.W_beta >= 1 && d.H > 0.0 && v_half > 0.0) {
        const OracleBound t1 = oracle_bound_t1(approx_error, d.H, v_half, d.W_beta);
        d.alpha_opt1 = t1.alpha_opt;
        d.bound_t1 = t1.rhs;
    } else {
        d.alpha_opt1 = kInf;
        d.bound_t1 = approx_error;
    }

    const double L = dict.sup_norms.maxCoeff();
    const double L_min = dict.sup_norms.minCoeff();
    const double v_dw = v(weights.delta / (2.0 * W), weights.n, W);

    const double rho_star_bs = coherence_stats(g, I_star).rho_star;
    d.condition_a = check_condition_a(rho_star_bs, L, L_min, d.lambda_W, d.G_star);
    d.condition_b = check_condition_b(beta_star, v_dw, L);

    if (d.lambda_W > 0.0) {
        const OracleBound t2 = oracle_bound_t2(approx_error, d.G, d.lambda_W, v_half);
        d.alpha_opt2 = t2.alpha_opt;
        d.bound_t2 = t2.rhs;
        d.bound_c2 = corollary2_bound(v_dw, d.G_star, L_min, d.lambda_W);
    } else {
        // Singular Gram: Theorem-2 style quantities are not applicable.
        d.alpha_opt2 = kNaN;
        d.bound_t2 = kNaN;
        d.bound_c2 = kNaN;
    }
    d.bound_c1 = corollary1_bound(v_dw, static_cast<int>(I_star.size()), L, L_min, gamma);
    return d;
}

} // namespace csde
