#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace csde {

enum class Domain { continuous, discrete };

/**
 * One base density h_j.  Four kinds: Gaussian (continuous), Poisson,
 * negative binomial and tabulated (discrete over the nonnegative integers).
 * `scale` is 1 for a genuine density and records the multiplier applied by
 * Dictionary::normalize (scaled atoms are no longer densities).
 *
 * NegBinomial uses the (successes r, success probability p) form arranged so
 * that NB(r, r/(lambda+r)) has mean lambda and variance lambda + lambda^2/r.
 */
struct BaseDensity {
    enum class Kind { gaussian, poisson, negbinomial, tabulated };

    Kind kind;
    double mu = 0.0, sigma = 1.0;       // gaussian
    double lambda = 1.0;                // poisson
    double r = 1.0, p = 0.5;            // negbinomial
    std::map<long long, double> values; // tabulated
    double scale = 1.0;

    static BaseDensity gaussian(double mu, double sigma);
    static BaseDensity poisson(double lambda);
    static BaseDensity neg_binomial(double r, double p);
    static BaseDensity neg_binomial_mean(double r, double lambda); // p = r/(lambda+r)
    static BaseDensity tabulated(std::map<long long, double> values);

    Domain domain() const {
        return kind == Kind::gaussian ? Domain::continuous : Domain::discrete;
    }
};

// Pointwise h_j(x).  Discrete atoms reject non-integer x.
double evaluate(const BaseDensity& base, double x);

// L_j = sup_x h_j(x): pdf at the mean, or pmf at the mode.
double sup_norm(const BaseDensity& base);

// ||h_j||: closed form for Gaussians, truncated sum for discrete kinds.
double l2_norm(const BaseDensity& base);

// <a,b>.  Gaussian pairs use the convolution identity
// phi(mu_a - mu_b; 0, sqrt(sigma_a^2 + sigma_b^2)); discrete pairs sum over k
// until both remaining tails drop below 1e-12 (hard cap k = 10^6).
// Mixed domains throw.
double inner_product(const BaseDensity& a, const BaseDensity& b);

// Pmf table p(0..), extended until the remaining tail mass < tail_eps.
std::vector<double> pmf_table(const BaseDensity& base, double tail_eps = 1e-15);

struct Dictionary {
    std::vector<BaseDensity> atoms;
    Eigen::VectorXd l2_norms;
    Eigen::VectorXd sup_norms;
    bool normalized = false;

    explicit Dictionary(std::vector<BaseDensity> atoms_);

    int size() const { return static_cast<int>(atoms.size()); }
    Domain domain() const { return atoms.front().domain(); }
};

struct GramMatrix {
    Eigen::MatrixXd entries;
    int size() const { return static_cast<int>(entries.rows()); }
};

struct CoherenceStats {
    double rho_max = 0.0;
    double rho_star = 0.0;
    long long sparse_index = 0;
};

struct NormalizeResult {
    Dictionary dict;
    Eigen::VectorXd scales; // multiply fitted coefficients by `scales` to map back
};

// All pairwise <h_i,h_j>; exactly symmetric by construction.
GramMatrix gram(const Dictionary& dict);

// rho_max / rho_star over the given support (0-based indices); sparse index of
// the whole matrix (strictly-lower-triangle entries with |psi_ij| > 1e-12).
CoherenceStats coherence_stats(const GramMatrix& g, const std::vector<int>& support);

double min_eigenvalue(const GramMatrix& g);

// Scales every atom to unit L2 norm; scales[j] = 1/||h_j|| is what fitted
// coefficients must be multiplied by to return to the original basis.
NormalizeResult normalize(const Dictionary& dict);

// Regular grid of Gaussians: mu_j = a*j (j = 1..W).  sigma may have size 1
// (shared bandwidth) or W.
Dictionary grid_gaussian(int W, double a, const Eigen::VectorXd& sigma);

// Regular grid of Poissons: lambda_j = a*j (j = 1..W).
Dictionary grid_poisson(int W, double a);

} // namespace csde
