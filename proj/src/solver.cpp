#include "csde/solver.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace csde {

namespace {
void check_problem(const Problem& p) {
    const auto W = p.beta_tilde.size();
    if (p.gram.rows() != W || p.gram.cols() != W || p.omega.size() != W)
        throw std::invalid_argument("Problem: beta_tilde, gram and omega sizes must agree");
    if (!p.beta_tilde.allFinite() || !p.gram.allFinite() || !p.omega.allFinite() ||
        !std::isfinite(p.c))
        throw std::invalid_argument("Problem: non-finite inputs");
    if (p.c < 0.0) throw std::invalid_argument("Problem: c must be nonnegative");
    if ((p.omega.array() < 0.0).any())
        throw std::invalid_argument("Problem: omega must be nonnegative");
}

std::vector<int> support_of(const Eigen::VectorXd& beta) {
    std::vector<int> s;
    for (int j = 0; j < beta.size(); ++j)
        if (beta[j] != 0.0) s.push_back(j);
    return s;
}

Eigen::VectorXd kkt_residual_vector(const Eigen::VectorXd& beta, const Problem& p) {
    const Eigen::VectorXd g = p.beta_tilde - p.gram * beta - p.c * beta;
    Eigen::VectorXd res(beta.size());
    for (int k = 0; k < beta.size(); ++k) {
        if (beta[k] != 0.0) {
            const double sgn = beta[k] > 0.0 ? 1.0 : -1.0;
            res[k] = std::abs(g[k] - p.omega[k] * sgn);
        } else if (p.nonneg) {
            res[k] = std::max(0.0, g[k] - p.omega[k]);
        } else {
            res[k] = std::max(0.0, std::abs(g[k]) - p.omega[k]);
        }
    }
    return res;
}
} // namespace

double objective_value(const Problem& p, const Eigen::VectorXd& beta) {
    return -2.0 * p.beta_tilde.dot(beta) + beta.dot(p.gram * beta) +
           2.0 * p.omega.dot(beta.cwiseAbs()) + p.c * beta.squaredNorm();
}

Eigen::VectorXd empirical_moments(const Dictionary& dict, const std::vector<double>& sample) {
    if (sample.empty()) throw std::invalid_argument("empirical_moments: empty sample");
    const int W = dict.size();
    Eigen::VectorXd bt = Eigen::VectorXd::Zero(W);
    for (double x : sample)
        for (int j = 0; j < W; ++j) bt[j] += evaluate(dict.atoms[j], x);
    return bt / static_cast<double>(sample.size());
}

FitResult fit(const Problem& p, const FitOptions& options) {
    check_problem(p);
    if (options.max_iter < 1 || !(options.tol > 0.0))
        throw std::invalid_argument("fit: max_iter >= 1 and tol > 0 required");
    const int W = static_cast<int>(p.beta_tilde.size());
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(W);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(W); // r = gram * beta, maintained incrementally
#ifndef NDEBUG
    double prev_obj = objective_value(p, beta);
#endif
    int sweeps = 0;
    for (; sweeps < options.max_iter; ++sweeps) {
        double max_change = 0.0;
        for (int k = 0; k < W; ++k) {
            const double z = p.beta_tilde[k] - (r[k] - p.gram(k, k) * beta[k]);
            const double denom = p.gram(k, k) + p.c;
            double nb;
            if (p.nonneg) {
                nb = std::max(0.0, z - p.omega[k]) / denom;
            } else {
                const double mag = std::abs(z) - p.omega[k];
                nb = mag > 0.0 ? (z > 0.0 ? mag : -mag) / denom : 0.0;
            }
            const double d = nb - beta[k];
            if (d != 0.0) {
                r += p.gram.col(k) * d;
                beta[k] = nb;
                max_change = std::max(max_change, std::abs(d));
            }
        }
#ifndef NDEBUG
        const double obj = objective_value(p, beta);
        assert(obj <= prev_obj + 1e-10 && "coordinate descent objective increased");
        prev_obj = obj;
#endif
        if (max_change < options.tol) { ++sweeps; break; }
    }
    FitResult out;
    out.beta_hat = std::move(beta);
    out.support = support_of(out.beta_hat);
    out.objective = objective_value(p, out.beta_hat);
    out.kkt_residuals = kkt_residual_vector(out.beta_hat, p);
    out.iterations = sweeps;
    out.converged = out.kkt_residuals.maxCoeff() <= 10.0 * options.tol;
    return out;
}

FitResult fit_orthogonal(const Eigen::VectorXd& beta_tilde, const Eigen::VectorXd& omega,
                         double c, bool nonneg) {
    if (beta_tilde.size() != omega.size())
        throw std::invalid_argument("fit_orthogonal: size mismatch");
    const int W = static_cast<int>(beta_tilde.size());
    Eigen::VectorXd beta(W);
    for (int j = 0; j < W; ++j) {
        const double bt = beta_tilde[j];
        if (bt == 0.0) { beta[j] = 0.0; continue; } // threshold formula's 0/0 resolved to 0
        double val = std::max(0.0, 1.0 - omega[j] / std::abs(bt)) * bt / (1.0 + c);
        if (nonneg && val < 0.0) val = 0.0;
        beta[j] = val;
    }
    Problem p;
    p.beta_tilde = beta_tilde;
    p.gram = Eigen::MatrixXd::Identity(W, W);
    p.omega = omega;
    p.c = c;
    p.nonneg = nonneg;
    FitResult out;
    out.beta_hat = std::move(beta);
    out.support = support_of(out.beta_hat);
    out.objective = objective_value(p, out.beta_hat);
    out.kkt_residuals = kkt_residual_vector(out.beta_hat, p);
    out.iterations = 1;
    out.converged = true;
    return out;
}

KktReport kkt_check(const FitResult& result, const Problem& problem, double tol) {
    if (result.beta_hat.size() != problem.beta_tilde.size())
        throw std::invalid_argument("kkt_check: dimension mismatch");
    const Eigen::VectorXd res = kkt_residual_vector(result.beta_hat, problem);
    KktReport rep;
    rep.max_residual = res.size() ? res.maxCoeff() : 0.0;
    for (int k = 0; k < res.size(); ++k)
        if (res[k] > tol) rep.violations.push_back(k);
    return rep;
}

FitResult fit_variant(Variant variant, const std::vector<double>& sample,
                      const Dictionary& dict, const GramMatrix& g,
                      double lambda1, double lambda2, const FitOptions& options) {
    const PenaltySpec pen = variant_penalty(variant, dict, lambda1, lambda2);
    Problem p;
    p.beta_tilde = empirical_moments(dict, sample);
    p.gram = g.entries;
    p.omega = pen.omega;
    p.c = pen.c;
    return fit(p, options);
}

FitResult fit_variant(Variant variant, const std::vector<double>& sample,
                      const Dictionary& dict, double lambda1, double lambda2,
                      const FitOptions& options) {
    return fit_variant(variant, sample, dict, gram(dict), lambda1, lambda2, options);
}

} // namespace csde
