#include "csde/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace csde {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;

// signed difference d(x) = sum_j coef_j h_j(x)
double diff_at(const Dictionary& dict, const Eigen::VectorXd& coef, double x) {
    double s = 0.0;
    for (int j = 0; j < dict.size(); ++j)
        if (coef[j] != 0.0) s += coef[j] * evaluate(dict.atoms[j], x);
    return s;
}

// antiderivative of the difference: D(x) = sum_j coef_j * scale_j * Phi((x-mu_j)/sigma_j)
double diff_cdf(const Dictionary& dict, const Eigen::VectorXd& coef, double x) {
    double s = 0.0;
    for (int j = 0; j < dict.size(); ++j) {
        if (coef[j] == 0.0) continue;
        const auto& a = dict.atoms[j];
        s += coef[j] * a.scale * 0.5 * std::erfc(-(x - a.mu) / a.sigma * kInvSqrt2);
    }
    return s;
}

double continuous_tv(const Dictionary& dict, const Eigen::VectorXd& coef, int grid_points) {
    double lo = dict.atoms[0].mu, hi = dict.atoms[0].mu, smax = 0.0;
    for (const auto& a : dict.atoms) {
        lo = std::min(lo, a.mu);
        hi = std::max(hi, a.mu);
        smax = std::max(smax, a.sigma);
    }
    lo -= 8.0 * smax;
    hi += 8.0 * smax;
    const double h = (hi - lo) / static_cast<double>(grid_points - 1);

    double total = 0.0;
    double x0 = lo, f0 = diff_at(dict, coef, x0), F0 = diff_cdf(dict, coef, x0);
    for (int i = 1; i < grid_points; ++i) {
        const double x1 = lo + h * static_cast<double>(i);
        const double f1 = diff_at(dict, coef, x1);
        // locate a sign change inside the cell by bisection, then add the two
        // pieces' exact integrals; otherwise the whole cell is one signed piece
        if (f0 != 0.0 && f1 != 0.0 && std::signbit(f0) != std::signbit(f1)) {
            double a = x0, b = x1, fa = f0;
            for (int it = 0; it < 60; ++it) {
                const double m = 0.5 * (a + b);
                const double fm = diff_at(dict, coef, m);
                if (fm == 0.0) { a = b = m; break; }
                if (std::signbit(fm) == std::signbit(fa)) { a = m; fa = fm; }
                else b = m;
            }
            const double xc = 0.5 * (a + b);
            const double Fc = diff_cdf(dict, coef, xc);
            const double F1 = diff_cdf(dict, coef, x1);
            total += std::abs(Fc - F0) + std::abs(F1 - Fc);
            F0 = F1;
        } else {
            const double F1 = diff_cdf(dict, coef, x1);
            total += std::abs(F1 - F0);
            F0 = F1;
        }
        x0 = x1;
        f0 = f1;
    }
    return total;
}

double discrete_tv(const Dictionary& dict, const Eigen::VectorXd& coef) {
    std::size_t kmax = 0;
    std::vector<std::vector<double>> tables(dict.size());
    for (int j = 0; j < dict.size(); ++j) {
        if (coef[j] == 0.0) continue;
        tables[j] = pmf_table(dict.atoms[j]);
        kmax = std::max(kmax, tables[j].size());
    }
    double total = 0.0;
    for (std::size_t k = 0; k < kmax; ++k) {
        double d = 0.0;
        for (int j = 0; j < dict.size(); ++j)
            if (coef[j] != 0.0 && k < tables[j].size()) d += coef[j] * tables[j][k];
        total += std::abs(d);
    }
    return total;
}
} // namespace

double l1_error(const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& beta_star) {
    if (beta_hat.size() != beta_star.size())
        throw std::invalid_argument("l1_error: length mismatch");
    return (beta_hat - beta_star).cwiseAbs().sum();
}

double tv_error(const Dictionary& dict, const Eigen::VectorXd& beta_a,
                const Eigen::VectorXd& beta_b, int grid_points) {
    if (beta_a.size() != dict.size() || beta_b.size() != dict.size())
        throw std::invalid_argument("tv_error: coefficient length must equal dictionary size");
    if (grid_points < 2) throw std::invalid_argument("tv_error: need at least 2 grid points");
    const Eigen::VectorXd coef = beta_a - beta_b;
    if (coef.isZero(0.0)) return 0.0;
    return dict.domain() == Domain::continuous ? continuous_tv(dict, coef, grid_points)
                                               : discrete_tv(dict, coef);
}

SupportMetrics support_metrics(const std::vector<int>& support_hat,
                               const std::vector<int>& support_star) {
    const std::set<int> hat(support_hat.begin(), support_hat.end());
    const std::set<int> star(support_star.begin(), support_star.end());
    std::size_t inter = 0;
    for (int j : hat) inter += star.count(j);
    SupportMetrics m;
    m.exact = hat == star;
    m.precision = hat.empty() ? 1.0 : static_cast<double>(inter) / static_cast<double>(hat.size());
    m.recall = star.empty() ? 1.0 : static_cast<double>(inter) / static_cast<double>(star.size());
    return m;
}

ErrorReport error_report(const Dictionary& dict, const Eigen::VectorXd& beta_hat,
                         const Eigen::VectorXd& beta_star, int grid_points) {
    ErrorReport r;
    r.l1 = l1_error(beta_hat, beta_star);
    r.tv = tv_error(dict, beta_hat, beta_star, grid_points);
    std::vector<int> sh, ss;
    for (int j = 0; j < beta_hat.size(); ++j) if (beta_hat[j] != 0.0) sh.push_back(j);
    for (int j = 0; j < beta_star.size(); ++j) if (beta_star[j] != 0.0) ss.push_back(j);
    const SupportMetrics m = support_metrics(sh, ss);
    r.support_exact = m.exact;
    r.precision = m.precision;
    r.recall = m.recall;
    return r;
}

} // namespace csde
