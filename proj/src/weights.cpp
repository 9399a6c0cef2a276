#include "csde/weights.hpp"

#include <cmath>
#include <stdexcept>

namespace csde {

double v(double delta, int n, int W) {
    if (!(delta > 0.0) || !(delta < 1.0)) throw std::invalid_argument("v: delta must be in (0,1)");
    if (n < 1) throw std::invalid_argument("v: n must be positive");
    if (static_cast<double>(W) / delta <= 1.0)
        throw std::invalid_argument("v: W/delta must exceed 1 (log would be nonpositive)");
    return std::sqrt(std::log(static_cast<double>(W) / delta) / static_cast<double>(n));
}

WeightSpec csde_weights(const Dictionary& dict, int n, double delta, double c, double B) {
    if (c < 0.0) throw std::invalid_argument("csde_weights: c must be nonnegative");
    if (!(B > 0.0)) throw std::invalid_argument("csde_weights: B must be positive");
    WeightSpec w;
    w.n = n;
    w.W = dict.size();
    w.delta = delta;
    w.c = c;
    w.B = B;
    w.v_value = v(delta / 2.0, n, w.W);
    w.omega_tilde = 2.0 * std::sqrt(2.0) * w.v_value * dict.sup_norms;
    w.omega = w.omega_tilde.array() + c * B;
    return w;
}

double theorem1_c(const Eigen::VectorXd& omega_tilde, double B) {
    if (omega_tilde.size() == 0) throw std::invalid_argument("theorem1_c: empty weight sequence");
    if (!(B > 0.0)) throw std::invalid_argument("theorem1_c: B must be positive");
    return omega_tilde.minCoeff() / B;
}

Eigen::VectorXd discrete_sup_norm_estimate(const std::vector<double>& sample,
                                           const Dictionary& dict) {
    if (sample.empty()) throw std::invalid_argument("discrete_sup_norm_estimate: empty sample");
    if (dict.domain() != Domain::discrete)
        throw std::invalid_argument("discrete_sup_norm_estimate: discrete dictionary required");
    double mean = 0.0;
    for (double x : sample) mean += x;
    mean /= static_cast<double>(sample.size());
    const double at = std::nearbyint(mean);
    Eigen::VectorXd out(dict.size());
    for (int j = 0; j < dict.size(); ++j) out[j] = evaluate(dict.atoms[j], at);
    return out;
}

Variant variant_from_string(const std::string& name) {
    if (name == "lasso") return Variant::lasso;
    if (name == "enet") return Variant::enet;
    if (name == "adalasso") return Variant::adalasso;
    if (name == "csde") return Variant::csde;
    throw std::invalid_argument("unknown variant: " + name);
}

std::string to_string(Variant v) {
    switch (v) {
        case Variant::lasso: return "lasso";
        case Variant::enet: return "enet";
        case Variant::adalasso: return "adalasso";
        case Variant::csde: return "csde";
    }
    return "?";
}

PenaltySpec variant_penalty(Variant variant, const Dictionary& dict,
                            double lambda1, double lambda2, double B) {
    if (lambda1 < 0.0 || lambda2 < 0.0)
        throw std::invalid_argument("variant_penalty: lambdas must be nonnegative");
    const int W = dict.size();
    PenaltySpec p;
    switch (variant) {
        case Variant::lasso:
            p.omega = Eigen::VectorXd::Constant(W, lambda1);
            p.c = 0.0;
            break;
        case Variant::enet:
            p.omega = Eigen::VectorXd::Constant(W, lambda1);
            p.c = lambda2;
            break;
        case Variant::adalasso:
            p.omega = lambda1 / dict.sup_norms.maxCoeff() * dict.sup_norms;
            p.c = 0.0;
            break;
        case Variant::csde:
            p.omega = (lambda1 / dict.sup_norms.maxCoeff() * dict.sup_norms).array() + lambda2 * B;
            p.c = lambda2;
            break;
    }
    return p;
}

} // namespace csde
