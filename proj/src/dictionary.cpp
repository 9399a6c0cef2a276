#include "csde/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace csde {

namespace {
constexpr double kSqrt2Pi = 2.5066282746310005024;
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr long long kTruncationCap = 1000000; // hard cap for discrete sums
constexpr double kTailEps = 1e-12;            // dual-tail truncation rule

double gaussian_pdf(double x, double mu, double sigma) {
    const double z = (x - mu) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * kSqrt2Pi);
}

void check_valid(const BaseDensity& b) {
    switch (b.kind) {
        case BaseDensity::Kind::gaussian:
            if (!(b.sigma > 0.0)) throw std::invalid_argument("gaussian atom: sigma must be positive");
            break;
        case BaseDensity::Kind::poisson:
            if (!(b.lambda > 0.0)) throw std::invalid_argument("poisson atom: lambda must be positive");
            break;
        case BaseDensity::Kind::negbinomial:
            if (!(b.r > 0.0) || !(b.p > 0.0) || !(b.p < 1.0))
                throw std::invalid_argument("negbinomial atom: need r > 0 and p in (0,1)");
            break;
        case BaseDensity::Kind::tabulated:
            if (b.values.empty()) throw std::invalid_argument("tabulated atom: empty support");
            for (const auto& [k, v] : b.values) {
                if (k < 0 || v < 0.0) throw std::invalid_argument("tabulated atom: negative key or value");
            }
            break;
    }
}

// pmf at integer k >= 0 for unit-scale discrete atoms.
double discrete_pmf(const BaseDensity& b, long long k) {
    if (k < 0) return 0.0;
    switch (b.kind) {
        case BaseDensity::Kind::poisson: {
            // p(k) = e^{-lambda} lambda^k / k!, computed by the stable recurrence
            double p = std::exp(-b.lambda);
            for (long long i = 0; i < k; ++i) p *= b.lambda / static_cast<double>(i + 1);
            return p;
        }
        case BaseDensity::Kind::negbinomial: {
            // p(k) = C(k+r-1, k) p^r (1-p)^k via the recurrence p(k+1) = p(k)(k+r)(1-p)/(k+1)
            double p = std::pow(b.p, b.r);
            for (long long i = 0; i < k; ++i)
                p *= (static_cast<double>(i) + b.r) * (1.0 - b.p) / static_cast<double>(i + 1);
            return p;
        }
        case BaseDensity::Kind::tabulated: {
            const auto it = b.values.find(k);
            return it == b.values.end() ? 0.0 : it->second;
        }
        default:
            throw std::logic_error("discrete_pmf on continuous atom");
    }
}

long long discrete_mode(const BaseDensity& b) {
    switch (b.kind) {
        case BaseDensity::Kind::poisson:
            return static_cast<long long>(std::floor(b.lambda));
        case BaseDensity::Kind::negbinomial:
            if (b.r <= 1.0) return 0;
            return static_cast<long long>(std::floor((b.r - 1.0) * (1.0 - b.p) / b.p));
        case BaseDensity::Kind::tabulated: {
            long long arg = b.values.begin()->first;
            double best = -1.0;
            for (const auto& [k, v] : b.values)
                if (v > best) { best = v; arg = k; }
            return arg;
        }
        default:
            throw std::logic_error("discrete_mode on continuous atom");
    }
}
} // namespace

BaseDensity BaseDensity::gaussian(double mu, double sigma) {
    BaseDensity b; b.kind = Kind::gaussian; b.mu = mu; b.sigma = sigma;
    check_valid(b);
    return b;
}

BaseDensity BaseDensity::poisson(double lambda) {
    BaseDensity b; b.kind = Kind::poisson; b.lambda = lambda;
    check_valid(b);
    return b;
}

BaseDensity BaseDensity::neg_binomial(double r, double p) {
    BaseDensity b; b.kind = Kind::negbinomial; b.r = r; b.p = p;
    check_valid(b);
    return b;
}

BaseDensity BaseDensity::neg_binomial_mean(double r, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("neg_binomial_mean: lambda must be positive");
    return neg_binomial(r, r / (lambda + r));
}

BaseDensity BaseDensity::tabulated(std::map<long long, double> values) {
    BaseDensity b; b.kind = Kind::tabulated; b.values = std::move(values);
    check_valid(b);
    return b;
}

double evaluate(const BaseDensity& base, double x) {
    if (base.domain() == Domain::continuous)
        return base.scale * gaussian_pdf(x, base.mu, base.sigma);
    const double rounded = std::nearbyint(x);
    if (rounded != x)
        throw std::invalid_argument("evaluate: non-integer point passed to a discrete base density");
    if (x < 0) return 0.0;
    return base.scale * discrete_pmf(base, static_cast<long long>(rounded));
}

double sup_norm(const BaseDensity& base) {
    if (base.kind == BaseDensity::Kind::gaussian)
        return base.scale / (base.sigma * kSqrt2Pi);
    const long long m = discrete_mode(base);
    // pmf kinds are unimodal; check the mode's neighbours to absorb floor()
    double best = 0.0;
    for (long long k = std::max(0LL, m - 1); k <= m + 1; ++k)
        best = std::max(best, discrete_pmf(base, k));
    return base.scale * best;
}

std::vector<double> pmf_table(const BaseDensity& base, double tail_eps) {
    if (base.domain() != Domain::discrete)
        throw std::invalid_argument("pmf_table: continuous atom");
    if (base.kind == BaseDensity::Kind::tabulated) {
        const long long kmax = base.values.rbegin()->first;
        std::vector<double> t(static_cast<std::size_t>(kmax) + 1, 0.0);
        for (const auto& [k, v] : base.values) t[static_cast<std::size_t>(k)] = base.scale * v;
        return t;
    }
    std::vector<double> t;
    const long long mode = discrete_mode(base);
    double p = base.kind == BaseDensity::Kind::poisson ? std::exp(-base.lambda)
                                                       : std::pow(base.p, base.r);
    double cum = 0.0;
    for (long long k = 0; k <= kTruncationCap; ++k) {
        t.push_back(base.scale * p);
        cum += p;
        if (1.0 - cum < tail_eps && k > mode) break;
        p *= base.kind == BaseDensity::Kind::poisson
                 ? base.lambda / static_cast<double>(k + 1)
                 : (static_cast<double>(k) + base.r) * (1.0 - base.p) / static_cast<double>(k + 1);
    }
    return t;
}

double l2_norm(const BaseDensity& base) {
    if (base.kind == BaseDensity::Kind::gaussian)
        return base.scale / std::sqrt(2.0 * base.sigma * kSqrtPi);
    const auto t = pmf_table(base);
    double s = 0.0;
    for (double v : t) s += v * v;
    return std::sqrt(s);
}

double inner_product(const BaseDensity& a, const BaseDensity& b) {
    if (a.domain() != b.domain())
        throw std::invalid_argument("inner_product: mixed continuous/discrete domains");
    if (a.domain() == Domain::continuous) {
        const double s = std::sqrt(a.sigma * a.sigma + b.sigma * b.sigma);
        return a.scale * b.scale * gaussian_pdf(a.mu - b.mu, 0.0, s);
    }
    // Discrete: sum a(k)b(k), truncated where both remaining tails are below kTailEps.
    const auto ta = pmf_table(a, kTailEps);
    const auto tb = pmf_table(b, kTailEps);
    const std::size_t n = std::min(ta.size(), tb.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) sum += ta[k] * tb[k];
    return sum;
}

Dictionary::Dictionary(std::vector<BaseDensity> atoms_) : atoms(std::move(atoms_)) {
    if (atoms.empty()) throw std::invalid_argument("Dictionary: needs at least one atom");
    const Domain d = atoms.front().domain();
    for (const auto& a : atoms) {
        check_valid(a);
        if (a.domain() != d)
            throw std::invalid_argument("Dictionary: all atoms must share one domain kind");
    }
    const int W = size();
    l2_norms.resize(W);
    sup_norms.resize(W);
    for (int j = 0; j < W; ++j) {
        l2_norms[j] = l2_norm(atoms[j]);
        sup_norms[j] = sup_norm(atoms[j]);
        if (!(l2_norms[j] > 0.0))
            throw std::invalid_argument("Dictionary: atom with zero L2 norm");
    }
}

GramMatrix gram(const Dictionary& dict) {
    const int W = dict.size();
    Eigen::MatrixXd m(W, W);
    if (dict.domain() == Domain::discrete) {
        // precompute pmf tables once; entries are plain dot products
        std::vector<std::vector<double>> tables(W);
        for (int j = 0; j < W; ++j) tables[j] = pmf_table(dict.atoms[j]);
        for (int i = 0; i < W; ++i) {
            for (int j = i; j < W; ++j) {
                const auto& a = tables[i];
                const auto& b = tables[j];
                const std::size_t n = std::min(a.size(), b.size());
                double s = 0.0;
                for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
                m(i, j) = s;
                m(j, i) = s;
            }
        }
    } else {
        for (int i = 0; i < W; ++i) {
            for (int j = i; j < W; ++j) {
                const double v = inner_product(dict.atoms[i], dict.atoms[j]);
                m(i, j) = v;
                m(j, i) = v;
            }
        }
    }
    return GramMatrix{std::move(m)};
}

CoherenceStats coherence_stats(const GramMatrix& g, const std::vector<int>& support) {
    const int W = g.size();
    CoherenceStats st;
    for (int i = 0; i < W; ++i)
        for (int j = 0; j < i; ++j)
            if (std::abs(g.entries(i, j)) > 1e-12) ++st.sparse_index;
    if (support.empty()) return st;

    Eigen::VectorXd norms = g.entries.diagonal().cwiseSqrt();
    auto rho = [&](int i, int j) { return g.entries(i, j) / (norms[i] * norms[j]); };
    for (int i : support) {
        if (i < 0 || i >= W) throw std::out_of_range("coherence_stats: support index out of range");
        for (int j = 0; j < W; ++j) {
            if (j == i) continue;
            st.rho_max = std::max(st.rho_max, std::abs(rho(i, j)));
            if (j > i) st.rho_star += std::abs(rho(i, j));
        }
    }
    return st;
}

double min_eigenvalue(const GramMatrix& g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.entries, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

NormalizeResult normalize(const Dictionary& dict) {
    std::vector<BaseDensity> atoms = dict.atoms;
    const int W = dict.size();
    Eigen::VectorXd scales(W);
    for (int j = 0; j < W; ++j) {
        const double nrm = dict.l2_norms[j];
        atoms[j].scale /= nrm;
        scales[j] = 1.0 / nrm;
    }
    Dictionary out(std::move(atoms));
    out.normalized = true;
    return NormalizeResult{std::move(out), std::move(scales)};
}

Dictionary grid_gaussian(int W, double a, const Eigen::VectorXd& sigma) {
    if (W < 1) throw std::invalid_argument("grid_gaussian: W must be >= 1");
    if (sigma.size() != 1 && sigma.size() != W)
        throw std::invalid_argument("grid_gaussian: sigma must have size 1 or W");
    std::vector<BaseDensity> atoms;
    atoms.reserve(W);
    for (int j = 1; j <= W; ++j)
        atoms.push_back(BaseDensity::gaussian(a * j, sigma.size() == 1 ? sigma[0] : sigma[j - 1]));
    return Dictionary(std::move(atoms));
}

Dictionary grid_poisson(int W, double a) {
    if (W < 1) throw std::invalid_argument("grid_poisson: W must be >= 1");
    std::vector<BaseDensity> atoms;
    atoms.reserve(W);
    for (int j = 1; j <= W; ++j) atoms.push_back(BaseDensity::poisson(a * j));
    return Dictionary(std::move(atoms));
}

} // namespace csde
