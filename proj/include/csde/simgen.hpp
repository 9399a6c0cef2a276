#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "csde/dictionary.hpp"
#include "csde/tuning.hpp"
#include "csde/weights.hpp"

namespace csde {

enum class Family { gaussian_mix, poisson_mix, lowdim_s1, lowdim_s2 };
enum class Channel { clean, variance_inflated, neg_binomial };

Family family_from_string(const std::string& name);
std::string to_string(Family f);
Channel channel_from_string(const std::string& name);
std::string to_string(Channel c);

/**
 * A fully specified synthetic experiment: the true sparse mixture, the
 * dictionary templates and the contamination channel.  Samples are drawn
 * from the contaminated components; the dictionary handed to estimators is
 * always the clean one.
 */
struct ExperimentConfig {
    Family family = Family::gaussian_mix;
    int W = 81;
    int n = 100;
    int N_reps = 100;
    std::uint64_t base_seed = 1;
    Channel channel = Channel::clean;
    double inflation = 1.1; // variance multiplier for the Gaussian channel
    double r = 6.0;         // shape of the overdispersed count channel
    Eigen::VectorXd beta_star;
    Eigen::VectorXd mu;     // continuous families
    Eigen::VectorXd sigma;  // continuous families
    Eigen::VectorXd lambda; // count family
};

// High-dimensional Gaussian grid: mu_j = 0.5 j, blockwise sigma template,
// 8-point support summing to 1.  Requires W >= 76.
ExperimentConfig gaussian_config(int W);

// Count analogue on the same support: Poisson grid lambda_j = 0.1 j.
ExperimentConfig poisson_config(int W);

// The two small well-separated scenarios (W=6 and W=7), clean channel, n=50.
std::vector<ExperimentConfig> lowdim_configs();

// The clean dictionary the estimators see.
Dictionary experiment_dictionary(const ExperimentConfig& config);

// One replication's observations; deterministic in (base_seed, rep_index).
std::vector<double> sample_gaussian_contaminated(const ExperimentConfig& config,
                                                 int rep_index);
std::vector<double> sample_poisson_contaminated(const ExperimentConfig& config,
                                                int rep_index);
std::vector<double> draw_sample(const ExperimentConfig& config, int rep_index);

/**
 * One estimator entry in a replication study.  `name` is one of
 * lasso | enet | adalasso | csde | em.  Penalized variants use the fixed
 * (lambda1, lambda2) unless tune_per_rep is set, in which case each
 * replication runs its own split-based search over `tune` ranges.
 */
struct EstimatorSpec {
    std::string name = "csde";
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    bool tune_per_rep = false;
    TuneConfig tune;
};

struct EstimatorSummary {
    std::string name;
    double lambda1_used = 0.0; // mean of selected values when tuned per rep
    double lambda2_used = 0.0;
    double l1_mean = 0.0;
    double l1_std = 0.0;
    double tv_mean = 0.0;
    double tv_std = 0.0;
    double support_exact_rate = 0.0;
    int failures = 0;
    std::vector<double> l1_values; // successful replications, in rep order
    std::vector<double> tv_values;
};

struct ReplicationReport {
    Family family = Family::gaussian_mix;
    int W = 0;
    int n = 0;
    int N_reps = 0;
    std::uint64_t base_seed = 0;
    std::vector<EstimatorSummary> estimators;
};

// Monte-Carlo driver: per replication draw one sample, fit every estimator,
// score against beta_star; replications run in parallel (capped by the
// CSDE_THREADS environment variable), aggregation is a single ordered reduce
// so reports are bitwise reproducible at any thread count.
ReplicationReport run_replications(const ExperimentConfig& config,
                                   const std::vector<EstimatorSpec>& estimators);

// min(jobs, CSDE_THREADS or hardware concurrency), at least 1.
int thread_budget(int jobs);

} // namespace csde
