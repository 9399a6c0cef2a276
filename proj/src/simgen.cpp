#include "csde/simgen.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "csde/baselines.hpp"
#include "csde/metrics.hpp"
#include "csde/rng.hpp"
#include "csde/solver.hpp"

namespace csde {

namespace {

// 8-point support shared by both grid experiments (1-based positions).
const std::vector<std::pair<int, double>> kSupportTemplate = {
    {9, 0.2},  {20, 0.1}, {26, 0.1},  {37, 0.1},
    {48, 0.1}, {54, 0.15}, {65, 0.15}, {76, 0.1}};

Eigen::VectorXd beta_star_template(int W) {
    if (W < 76) throw std::invalid_argument("experiment config: W must be at least 76");
    Eigen::VectorXd b = Eigen::VectorXd::Zero(W);
    for (const auto& [pos, val] : kSupportTemplate) b[pos - 1] = val;
    return b;
}

Eigen::VectorXd sigma_template(int W) {
    // Blockwise plateaus; the final block extends to fill the grid.
    const std::vector<std::pair<double, int>> blocks = {
        {1.0, 20}, {0.8, 6}, {0.6, 11}, {0.4, 11}, {0.6, 6}, {0.8, 11}};
    Eigen::VectorXd s(W);
    int at = 0;
    for (const auto& [val, len] : blocks)
        for (int i = 0; i < len && at < W; ++i) s[at++] = val;
    while (at < W) s[at++] = 1.2;
    return s;
}

std::vector<double> to_vector(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

std::vector<int> nonzero_set(const Eigen::VectorXd& b) {
    std::vector<int> s;
    for (int j = 0; j < b.size(); ++j)
        if (b[j] != 0.0) s.push_back(j);
    return s;
}

struct RepOutcome {
    bool ok = false;
    double l1 = 0.0, tv = 0.0;
    bool exact = false;
    double lambda1 = 0.0, lambda2 = 0.0;
};

} // namespace

Family family_from_string(const std::string& name) {
    if (name == "gaussian-grid" || name == "gaussian") return Family::gaussian_mix;
    if (name == "poisson-grid" || name == "poisson") return Family::poisson_mix;
    if (name == "lowdim-1" || name == "lowdim-s1") return Family::lowdim_s1;
    if (name == "lowdim-2" || name == "lowdim-s2") return Family::lowdim_s2;
    throw std::invalid_argument("unknown experiment family: " + name);
}

std::string to_string(Family f) {
    switch (f) {
        case Family::gaussian_mix: return "gaussian-grid";
        case Family::poisson_mix: return "poisson-grid";
        case Family::lowdim_s1: return "lowdim-1";
        case Family::lowdim_s2: return "lowdim-2";
    }
    return "?";
}

Channel channel_from_string(const std::string& name) {
    if (name == "clean") return Channel::clean;
    if (name == "variance-inflated") return Channel::variance_inflated;
    if (name == "neg-binomial") return Channel::neg_binomial;
    throw std::invalid_argument("unknown channel: " + name);
}

std::string to_string(Channel c) {
    switch (c) {
        case Channel::clean: return "clean";
        case Channel::variance_inflated: return "variance-inflated";
        case Channel::neg_binomial: return "neg-binomial";
    }
    return "?";
}

ExperimentConfig gaussian_config(int W) {
    ExperimentConfig cfg;
    cfg.family = Family::gaussian_mix;
    cfg.W = W;
    cfg.channel = Channel::variance_inflated;
    cfg.beta_star = beta_star_template(W);
    cfg.mu = 0.5 * Eigen::VectorXd::LinSpaced(W, 1, W);
    cfg.sigma = sigma_template(W);
    return cfg;
}

ExperimentConfig poisson_config(int W) {
    ExperimentConfig cfg;
    cfg.family = Family::poisson_mix;
    cfg.W = W;
    cfg.channel = Channel::neg_binomial;
    cfg.beta_star = beta_star_template(W);
    cfg.lambda = 0.1 * Eigen::VectorXd::LinSpaced(W, 1, W);
    return cfg;
}

std::vector<ExperimentConfig> lowdim_configs() {
    ExperimentConfig s1;
    s1.family = Family::lowdim_s1;
    s1.W = 6;
    s1.n = 50;
    s1.channel = Channel::clean;
    s1.beta_star = (Eigen::VectorXd(6) << 0.3, 0, 0, 0.3, 0, 0.4).finished();
    s1.mu = (Eigen::VectorXd(6) << 0, 10, 20, 30, 40, 50).finished();
    s1.sigma = (Eigen::VectorXd(6) << 1, 2, 3, 4, 5, 6).finished();

    ExperimentConfig s2;
    s2.family = Family::lowdim_s2;
    s2.W = 7;
    s2.n = 50;
    s2.channel = Channel::clean;
    s2.beta_star = (Eigen::VectorXd(7) << 0.1, 0, 0, 0.8, 0, 0, 0.1).finished();
    s2.mu = Eigen::VectorXd::LinSpaced(7, 0, 6);
    s2.sigma = (Eigen::VectorXd(7) << 0.3, 0.2, 0.2, 0.1, 0.2, 0.2, 0.3).finished();
    return {s1, s2};
}

Dictionary experiment_dictionary(const ExperimentConfig& config) {
    std::vector<BaseDensity> atoms;
    atoms.reserve(config.W);
    if (config.family == Family::poisson_mix) {
        for (int j = 0; j < config.W; ++j)
            atoms.push_back(BaseDensity::poisson(config.lambda[j]));
    } else {
        for (int j = 0; j < config.W; ++j)
            atoms.push_back(BaseDensity::gaussian(config.mu[j], config.sigma[j]));
    }
    return Dictionary(std::move(atoms));
}

std::vector<double> sample_gaussian_contaminated(const ExperimentConfig& config,
                                                 int rep_index) {
    if (config.family == Family::poisson_mix)
        throw std::invalid_argument("sample_gaussian_contaminated: count-family config");
    const double widen =
        config.channel == Channel::variance_inflated ? std::sqrt(config.inflation) : 1.0;
    Rng rng = Rng::for_replication(config.base_seed, static_cast<std::uint64_t>(rep_index));
    const std::vector<double> probs = to_vector(config.beta_star);
    std::vector<double> x(config.n);
    for (int i = 0; i < config.n; ++i) {
        const std::size_t j = rng.categorical(probs);
        x[i] = rng.normal(config.mu[j], config.sigma[j] * widen);
    }
    return x;
}

std::vector<double> sample_poisson_contaminated(const ExperimentConfig& config,
                                                int rep_index) {
    if (config.family != Family::poisson_mix)
        throw std::invalid_argument("sample_poisson_contaminated: continuous-family config");
    Rng rng = Rng::for_replication(config.base_seed, static_cast<std::uint64_t>(rep_index));
    const std::vector<double> probs = to_vector(config.beta_star);
    std::vector<double> x(config.n);
    for (int i = 0; i < config.n; ++i) {
        const std::size_t j = rng.categorical(probs);
        x[i] = config.channel == Channel::neg_binomial
                   ? static_cast<double>(rng.neg_binomial_mean(config.r, config.lambda[j]))
                   : static_cast<double>(rng.poisson(config.lambda[j]));
    }
    return x;
}

std::vector<double> draw_sample(const ExperimentConfig& config, int rep_index) {
    return config.family == Family::poisson_mix
               ? sample_poisson_contaminated(config, rep_index)
               : sample_gaussian_contaminated(config, rep_index);
}

int thread_budget(int jobs) {
    int cap = static_cast<int>(std::thread::hardware_concurrency());
    if (cap < 1) cap = 1;
    if (const char* env = std::getenv("CSDE_THREADS")) {
        const int requested = std::atoi(env);
        if (requested >= 1) cap = requested;
    }
    return std::max(1, std::min(jobs, cap));
}

ReplicationReport run_replications(const ExperimentConfig& config,
                                   const std::vector<EstimatorSpec>& estimators) {
    if (config.N_reps < 1) throw std::invalid_argument("run_replications: N_reps must be >= 1");
    if (config.n < 1) throw std::invalid_argument("run_replications: n must be >= 1");
    if (estimators.empty()) throw std::invalid_argument("run_replications: no estimators");
    if (config.beta_star.size() != config.W)
        throw std::invalid_argument("run_replications: beta_star length != W");

    const Dictionary dict = experiment_dictionary(config);
    const GramMatrix g = gram(dict);
    const std::vector<int> support_star = nonzero_set(config.beta_star);
    const int E = static_cast<int>(estimators.size());
    const int N = config.N_reps;

    std::vector<std::vector<RepOutcome>> cell(E, std::vector<RepOutcome>(N));

    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int rep = next.fetch_add(1); rep < N; rep = next.fetch_add(1)) {
            const std::vector<double> sample = draw_sample(config, rep);
            for (int e = 0; e < E; ++e) {
                const EstimatorSpec& spec = estimators[e];
                RepOutcome& out = cell[e][rep];
                try {
                    Eigen::VectorXd beta_hat;
                    if (spec.name == "em") {
                        beta_hat = em_fit(sample, dict);
                    } else {
                        const Variant variant = variant_from_string(spec.name);
                        double l1 = spec.lambda1, l2 = spec.lambda2;
                        if (spec.tune_per_rep) {
                            TuneConfig tc = spec.tune;
                            tc.seed = splitmix64(config.base_seed ^
                                                 splitmix64(static_cast<std::uint64_t>(rep) + 1) ^
                                                 0x9E3779B97F4A7C15ULL);
                            const TuneResult tr = tune(tc, sample, dict, variant);
                            l1 = tr.lambda1;
                            l2 = tr.lambda2;
                        }
                        beta_hat = fit_variant(variant, sample, dict, g, l1, l2).beta_hat;
                        out.lambda1 = l1;
                        out.lambda2 = l2;
                    }
                    out.l1 = l1_error(beta_hat, config.beta_star);
                    out.tv = tv_error(dict, beta_hat, config.beta_star);
                    out.exact = support_metrics(nonzero_set(beta_hat), support_star).exact;
                    out.ok = true;
                } catch (const std::exception&) {
                    out.ok = false;
                }
            }
        }
    };

    const int threads = thread_budget(N);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    ReplicationReport report;
    report.family = config.family;
    report.W = config.W;
    report.n = config.n;
    report.N_reps = N;
    report.base_seed = config.base_seed;

    for (int e = 0; e < E; ++e) {
        const EstimatorSpec& spec = estimators[e];
        EstimatorSummary s;
        s.name = spec.name;
        double sum_l1 = 0, sum_tv = 0, sum_lam1 = 0, sum_lam2 = 0;
        int exact = 0;
        for (int rep = 0; rep < N; ++rep) {
            const RepOutcome& out = cell[e][rep];
            if (!out.ok) {
                ++s.failures;
                continue;
            }
            s.l1_values.push_back(out.l1);
            s.tv_values.push_back(out.tv);
            sum_l1 += out.l1;
            sum_tv += out.tv;
            sum_lam1 += out.lambda1;
            sum_lam2 += out.lambda2;
            if (out.exact) ++exact;
        }
        const int m = static_cast<int>(s.l1_values.size());
        if (m > 0) {
            s.l1_mean = sum_l1 / m;
            s.tv_mean = sum_tv / m;
            s.lambda1_used = spec.tune_per_rep || spec.name == "em" ? sum_lam1 / m : spec.lambda1;
            s.lambda2_used = spec.tune_per_rep || spec.name == "em" ? sum_lam2 / m : spec.lambda2;
            s.support_exact_rate = static_cast<double>(exact) / m;
            if (m > 1) {
                double q1 = 0, qt = 0;
                for (int i = 0; i < m; ++i) {
                    q1 += (s.l1_values[i] - s.l1_mean) * (s.l1_values[i] - s.l1_mean);
                    qt += (s.tv_values[i] - s.tv_mean) * (s.tv_values[i] - s.tv_mean);
                }
                s.l1_std = std::sqrt(q1 / (m - 1));
                s.tv_std = std::sqrt(qt / (m - 1));
            }
        }
        report.estimators.push_back(std::move(s));
    }
    return report;
}

} // namespace csde
