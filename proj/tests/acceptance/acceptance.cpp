// Acceptance gate: each criterion prints one line with the measured values
// next to the windows it is judged against, then PASS or FAIL.  Exit code is
// 0 only when every requested criterion passes.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "csde/baselines.hpp"
#include "csde/io.hpp"
#include "csde/metrics.hpp"
#include "csde/rng.hpp"
#include "csde/simgen.hpp"
#include "csde/solver.hpp"
#include "csde/theory.hpp"
#include "csde/tuning.hpp"
#include "csde/weights.hpp"

using namespace csde;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4g", x);
    return buf;
}

std::string in_window(const char* label, double value, double lo, double hi) {
    const bool ok = value >= lo && value <= hi;
    return std::string(label) + " " + num(value) + (ok ? " within [" : " outside [") + num(lo) +
           ", " + num(hi) + "]";
}

bool window_ok(double value, double lo, double hi) { return value >= lo && value <= hi; }

// ---- 1: stationarity of converged fits on random positive definite Grams

Outcome criterion_stationarity() {
    Rng rng(101);
    int converged = 0;
    const int trials = 200;
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const int W = 2 + static_cast<int>(rng.below(49));
        Eigen::MatrixXd A(W, W);
        for (int i = 0; i < W; ++i)
            for (int j = 0; j < W; ++j) A(i, j) = rng.normal();
        Problem p;
        p.gram = A.transpose() * A / W;
        p.gram += (0.01 + 0.29 * rng.uniform()) * Eigen::MatrixXd::Identity(W, W);

        Eigen::VectorXd truth = Eigen::VectorXd::Zero(W);
        for (int j = 0; j < W; ++j)
            if (rng.uniform() < 0.3) truth[j] = rng.uniform();
        p.beta_tilde = p.gram * truth;
        for (int j = 0; j < W; ++j) p.beta_tilde[j] += 0.1 * rng.normal();

        p.omega = Eigen::VectorXd::Zero(W);
        for (int j = 0; j < W; ++j) p.omega[j] = 0.01 + 0.2 * rng.uniform();
        p.c = t % 3 == 0 ? 0.05 * rng.uniform() : 0.0;

        const FitResult fr = fit(p);
        if (!fr.converged) continue;
        ++converged;
        worst = std::max(worst, kkt_check(fr, p, 1e-6).max_residual);
    }
    Outcome o;
    o.pass = converged == trials && worst <= 1e-6;
    o.detail = std::to_string(converged) + "/" + std::to_string(trials) +
               " converged, worst stationarity residual " + num(worst) + " (limit 1e-06)";
    return o;
}

// ---- 2: coordinate descent equals the closed form on orthonormal problems

Outcome criterion_closed_form() {
    Rng rng(202);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const int W = 1 + static_cast<int>(rng.below(30));
        Problem p;
        p.gram = Eigen::MatrixXd::Identity(W, W);
        p.beta_tilde = Eigen::VectorXd::Zero(W);
        p.omega = Eigen::VectorXd::Zero(W);
        for (int j = 0; j < W; ++j) {
            p.beta_tilde[j] = rng.normal();
            p.omega[j] = 0.3 * rng.uniform();
        }
        p.c = 0.2 * rng.uniform();
        p.nonneg = t % 2 == 0;
        const FitResult iterative = fit(p);
        const FitResult closed = fit_orthogonal(p.beta_tilde, p.omega, p.c, p.nonneg);
        worst = std::max(
            worst, (iterative.beta_hat - closed.beta_hat).lpNorm<Eigen::Infinity>());
    }
    Outcome o;
    o.pass = worst <= 1e-8;
    o.detail = "worst closed-form gap " + num(worst) + " over 100 problems (limit 1e-08)";
    return o;
}

// ---- 3: the simultaneous concentration event behind the weights

Outcome criterion_weight_event() {
    std::vector<BaseDensity> atoms;
    for (int j = 0; j < 10; ++j) atoms.push_back(BaseDensity::gaussian(30.0 * j, 1.0));
    const Dictionary raw(atoms);
    const NormalizeResult nr = normalize(raw);
    const int n = 200;
    const WeightSpec w = csde_weights(nr.dict, n, 0.1, 0.0, 1.0);

    const std::vector<double> probs(10, 0.1);
    Eigen::VectorXd expected = Eigen::VectorXd::Zero(10);
    for (int k = 0; k < 10; ++k)
        for (int j = 0; j < 10; ++j)
            expected[k] += probs[j] * inner_product(nr.dict.atoms[k], raw.atoms[j]);

    const int reps = 500;
    int hits = 0;
    for (int rep = 0; rep < reps; ++rep) {
        Rng rng = Rng::for_replication(3001, rep);
        std::vector<double> sample(n);
        for (int i = 0; i < n; ++i) {
            const std::size_t j = rng.categorical(probs);
            sample[i] = rng.normal(30.0 * static_cast<double>(j), 1.0);
        }
        const Eigen::VectorXd bt = empirical_moments(nr.dict, sample);
        bool all_in = true;
        for (int k = 0; k < 10; ++k)
            if (std::abs(bt[k] - expected[k]) > w.omega_tilde[k]) all_in = false;
        if (all_in) ++hits;
    }
    const double coverage = static_cast<double>(hits) / reps;
    Outcome o;
    o.pass = coverage >= 0.90;
    o.detail = "simultaneous weight event in " + num(100.0 * coverage) + "% of " +
               std::to_string(reps) + " replications (need >= 90%)";
    return o;
}

// ---- 4: wide gaussian replication table

Outcome criterion_wide_gaussian() {
    ExperimentConfig cfg = gaussian_config(321);
    cfg.n = 100;
    cfg.N_reps = 100;

    std::vector<EstimatorSpec> specs(2);
    specs[0].name = "csde";
    specs[0].lambda1 = 0.061;
    specs[0].lambda2 = 0.027;
    specs[1].name = "lasso";
    specs[1].lambda1 = 0.074;

    const ReplicationReport rep = run_replications(cfg, specs);
    const EstimatorSummary& csde_s = rep.estimators[0];
    const EstimatorSummary& lasso_s = rep.estimators[1];

    Outcome o;
    const bool l1_ok = window_ok(csde_s.l1_mean, 1.2, 2.1);
    const bool tv_ok = window_ok(csde_s.tv_mean, 0.4, 1.0);
    const bool order_ok = csde_s.l1_mean <= lasso_s.l1_mean;
    o.pass = l1_ok && tv_ok && order_ok && csde_s.failures == 0;
    o.detail = in_window("l1 mean", csde_s.l1_mean, 1.2, 2.1) + " (sd " + num(csde_s.l1_std) +
               "), " + in_window("tv mean", csde_s.tv_mean, 0.4, 1.0) + " (sd " +
               num(csde_s.tv_std) + "), vs flat-penalty l1 mean " + num(lasso_s.l1_mean) +
               (order_ok ? " (ordering holds)" : " (ordering violated)");
    return o;
}

// ---- 5: wide count replication table

Outcome criterion_wide_count() {
    ExperimentConfig cfg = poisson_config(321);
    cfg.n = 100;
    cfg.N_reps = 100;
    cfg.r = 6.0;

    std::vector<EstimatorSpec> specs(1);
    specs[0].name = "csde";
    specs[0].lambda1 = 0.158;
    specs[0].lambda2 = 0.203;

    const ReplicationReport rep = run_replications(cfg, specs);
    const EstimatorSummary& s = rep.estimators[0];

    Outcome o;
    const bool l1_ok = window_ok(s.l1_mean, 1.6, 2.1);
    const bool tv_ok = s.tv_mean <= 0.05;
    o.pass = l1_ok && tv_ok && s.failures == 0;
    o.detail = in_window("l1 mean", s.l1_mean, 1.6, 2.1) + " (sd " + num(s.l1_std) +
               "), tv mean " + num(s.tv_mean) + (tv_ok ? " within" : " outside") +
               " [0, 0.05] (sd " + num(s.tv_std) + ")";
    return o;
}

// ---- 6: small-scenario replication table

Outcome criterion_small_scenarios() {
    std::string detail;
    bool pass = true;
    const double windows[2][2][2] = {// scenario, estimator(csde, em), (lo, hi)
                                     {{0.10, 0.35}, {0.15, 0.40}},
                                     {{0.05, 0.20}, {0.05, 0.20}}};
    std::vector<ExperimentConfig> configs = lowdim_configs();
    for (std::size_t sc = 0; sc < configs.size(); ++sc) {
        ExperimentConfig cfg = configs[sc];
        cfg.N_reps = 100;

        std::vector<EstimatorSpec> specs(2);
        specs[0].name = "csde";
        specs[0].tune_per_rep = true;
        specs[1].name = "em";

        const ReplicationReport rep = run_replications(cfg, specs);
        for (int e = 0; e < 2; ++e) {
            const EstimatorSummary& s = rep.estimators[e];
            const double lo = windows[sc][e][0], hi = windows[sc][e][1];
            pass = pass && window_ok(s.l1_mean, lo, hi) && s.failures == 0;
            if (!detail.empty()) detail += ", ";
            detail += "scenario " + std::to_string(sc + 1) + " " + s.name + " " +
                      in_window("l1 mean", s.l1_mean, lo, hi);
        }
    }
    return {pass, detail};
}

// ---- 7: finite-sample risk-bound coverage on an orthogonal fixture

Outcome criterion_bound_coverage() {
    std::vector<BaseDensity> atoms;
    for (int j = 0; j < 10; ++j) atoms.push_back(BaseDensity::gaussian(30.0 * j, 1.0));
    const Dictionary dict(atoms);
    const GramMatrix g = gram(dict);

    Eigen::VectorXd beta_star = Eigen::VectorXd::Zero(10);
    beta_star[0] = 0.5;
    beta_star[2] = 0.3;
    beta_star[4] = 0.2;
    const int W_star = 3;
    const int n = 200;
    const double delta = 0.1;

    const WeightSpec w0 = csde_weights(dict, n, delta, 0.0, 1.0);
    const double c_star = theorem1_c(w0.omega_tilde, 1.0);
    const WeightSpec w = csde_weights(dict, n, delta, c_star, 1.0);

    // every atom shares sigma, so the weight-to-norm ratio is flat
    const double H = w.omega[0] / (w.v_value * dict.l2_norms[0]);
    const OracleBound b1 = oracle_bound_t1(0.0, H, w.v_value, W_star);
    double G = 0.0;
    for (int j : {0, 2, 4}) G += dict.sup_norms[j] * dict.sup_norms[j];
    const OracleBound b2 = oracle_bound_t2(0.0, G, min_eigenvalue(g), w.v_value);
    const bool alphas_exact = b1.alpha_opt == 2.0 && b2.alpha_opt == 2.0;

    const std::vector<double> probs{0.5, 0.0, 0.3, 0.0, 0.2, 0.0, 0.0, 0.0, 0.0, 0.0};
    const int reps = 500;
    int hits = 0;
    for (int rep = 0; rep < reps; ++rep) {
        Rng rng = Rng::for_replication(7001, rep);
        std::vector<double> sample(n);
        for (int i = 0; i < n; ++i) {
            const std::size_t j = rng.categorical(probs);
            sample[i] = rng.normal(30.0 * static_cast<double>(j), 1.0);
        }
        Problem p;
        p.beta_tilde = empirical_moments(dict, sample);
        p.gram = g.entries;
        p.omega = w.omega;
        p.c = c_star;
        const FitResult fr = fit(p);
        const Eigen::VectorXd d = fr.beta_hat - beta_star;
        const double lhs = d.dot(g.entries * d);
        if (lhs <= b1.rhs) ++hits;
    }
    const double coverage = static_cast<double>(hits) / reps;
    Outcome o;
    o.pass = coverage >= 1.0 - delta && alphas_exact;
    o.detail = "risk bound " + num(b1.rhs) + " held in " + num(100.0 * coverage) + "% of " +
               std::to_string(reps) + " replications (need >= 90%); alpha_opt pair (" +
               num(b1.alpha_opt) + ", " + num(b2.alpha_opt) +
               (alphas_exact ? ") exactly 2" : ") not exactly 2");
    return o;
}

// ---- 8: exact support recovery at large n under the beta-min weights

Outcome criterion_support_recovery() {
    ExperimentConfig cfg = gaussian_config(81);
    cfg.n = 2000;
    cfg.channel = Channel::clean;
    const Dictionary dict = experiment_dictionary(cfg);
    const GramMatrix g = gram(dict);

    const double L = dict.sup_norms.maxCoeff();
    double beta_min = 1.0;
    std::vector<int> support_star;
    for (int j = 0; j < cfg.W; ++j)
        if (cfg.beta_star[j] != 0.0) {
            support_star.push_back(j);
            beta_min = std::min(beta_min, cfg.beta_star[j]);
        }
    // largest v for which the beta-min condition still holds
    const double v_star = beta_min / (4.0 * std::sqrt(2.0) * L) * (1.0 - 1e-12);
    const bool b_holds = check_condition_b(cfg.beta_star, v_star, L);
    const Eigen::VectorXd omega = 2.0 * std::sqrt(2.0) * v_star * dict.sup_norms;

    const int reps = 100;
    int exact = 0;
    double fp = 0.0, fn = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        const std::vector<double> sample = draw_sample(cfg, rep);
        Problem p;
        p.beta_tilde = empirical_moments(dict, sample);
        p.gram = g.entries;
        p.omega = omega;
        const FitResult fr = fit(p);
        const SupportMetrics sm = support_metrics(fr.support, support_star);
        if (sm.exact) ++exact;
        int in_both = 0;
        for (int j : fr.support)
            if (cfg.beta_star[j] != 0.0) ++in_both;
        fp += static_cast<double>(fr.support.size() - in_both);
        fn += static_cast<double>(support_star.size() - in_both);
    }
    fp /= reps;
    fn /= reps;
    const double rate = static_cast<double>(exact) / reps;

    const double p3 = theorem3_probability(cfg.W, 0.1, 0.0);
    Outcome o;
    o.pass = rate >= 0.9 && b_holds;
    o.detail = "exact recovery rate " + num(rate) + " over " + std::to_string(reps) +
               " replications (need >= 0.9), mean extra atoms " + num(fp) +
               ", mean missed atoms " + num(fn) + "; beta-min condition " +
               (b_holds ? "holds" : "fails") + "; recovery probability bound " + num(p3) +
               (theorem3_vacuous(p3) ? " (vacuous)" : " (informative)");
    return o;
}

// ---- 9: metric sanity on a fitted wide-gaussian density

Outcome criterion_metric_sanity() {
    ExperimentConfig cfg = gaussian_config(81);
    cfg.n = 100;
    const Dictionary dict = experiment_dictionary(cfg);
    const std::vector<double> sample = draw_sample(cfg, 0);
    const FitResult fr = fit_variant(Variant::csde, sample, dict, 0.061, 0.027);

    const double tv_a = tv_error(dict, fr.beta_hat, cfg.beta_star, 20001);
    const double tv_b = tv_error(dict, fr.beta_hat, cfg.beta_star, 40001);
    const double gap = std::abs(tv_a - tv_b);
    const bool symmetric = tv_error(dict, fr.beta_hat, cfg.beta_star) ==
                           tv_error(dict, cfg.beta_star, fr.beta_hat);
    const double self = l1_error(fr.beta_hat, fr.beta_hat);

    Outcome o;
    o.pass = gap < 1e-6 && symmetric && self == 0.0;
    o.detail = "tv " + num(tv_a) + ", grid-doubling gap " + num(gap) +
               " (limit 1e-06), symmetry " + (symmetric ? "exact" : "broken") +
               ", self l1 " + num(self) + " (must be 0)";
    return o;
}

// ---- 10: byte-identical pipeline re-runs

Outcome criterion_determinism() {
    const char* bin = std::getenv("CSDE_BIN");
    if (!bin || !fs::exists(bin))
        return {false, "CSDE_BIN does not point at the command-line binary"};

    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    const fs::path root = fs::temp_directory_path() / ("csde-acc10-" + std::to_string(stamp));
    fs::create_directories(root);
    const std::string cfg_path = (root / "sim.txt").string();
    {
        std::ofstream out(cfg_path);
        out << "family = lowdim-1\n"
            << "N_reps = 10\n"
            << "tune = fixed\n"
            << "estimators = csde,em\n"
            << "lambda1.csde = 0.05\n"
            << "lambda2.csde = 0.01\n";
    }
    auto run = [&](const std::string& out_dir) {
        const std::string cmd = std::string("\"") + bin + "\" simulate --config " + cfg_path +
                                " --seed 7 --out " + out_dir + " > /dev/null 2>&1";
        return std::system(cmd.c_str()) == 0;
    };
    const std::string dir_a = (root / "a").string(), dir_b = (root / "b").string();
    const bool ran = run(dir_a) && run(dir_b);

    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string report_a = slurp(dir_a + "/report.csv");
    const std::string report_b = slurp(dir_b + "/report.csv");
    std::error_code ec;
    fs::remove_all(root, ec);

    Outcome o;
    o.pass = ran && !report_a.empty() && report_a == report_b;
    o.detail = std::string(ran ? "two runs completed" : "a run failed") + ", reports " +
               (report_a == report_b && !report_a.empty() ? "byte-identical (" : "differ (") +
               std::to_string(report_a.size()) + " bytes)";
    return o;
}

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double limit_seconds; // 0 = no budget in the criterion
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {"stationarity on random problems", criterion_stationarity, 30.0},
        {"orthonormal closed form", criterion_closed_form, 5.0},
        {"weight-event coverage", criterion_weight_event, 60.0},
        {"wide gaussian replication table", criterion_wide_gaussian, 600.0},
        {"wide count replication table", criterion_wide_count, 600.0},
        {"small-scenario replication table", criterion_small_scenarios, 300.0},
        {"risk-bound coverage", criterion_bound_coverage, 0.0},
        {"support recovery at large n", criterion_support_recovery, 0.0},
        {"metric sanity", criterion_metric_sanity, 0.0},
        {"pipeline determinism", criterion_determinism, 0.0},
    };

    std::vector<int> ids;
    const std::string which = argc > 1 ? argv[1] : "all";
    if (which == "all") {
        for (int i = 1; i <= 10; ++i) ids.push_back(i);
    } else {
        const int id = std::atoi(which.c_str());
        if (id < 1 || id > 10) {
            std::fprintf(stderr, "usage: acceptance [1-10|all]\n");
            return 2;
        }
        ids.push_back(id);
    }

    bool all_pass = true;
    for (int id : ids) {
        const Criterion& c = criteria[id - 1];
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool in_budget = c.limit_seconds <= 0.0 || secs < c.limit_seconds;
        const bool pass = o.pass && in_budget;
        std::printf("[%s] c%d %s: %s; %.1fs%s\n", pass ? "PASS" : "FAIL", id, c.name,
                    o.detail.c_str(), secs,
                    c.limit_seconds > 0.0
                        ? (" (budget " + num(c.limit_seconds) + "s)").c_str()
                        : "");
        std::fflush(stdout);
        all_pass = all_pass && pass;
    }
    return all_pass ? 0 : 1;
}
