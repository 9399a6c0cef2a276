#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "csde/baselines.hpp"
#include "csde/io.hpp"
#include "csde/metrics.hpp"
#include "csde/simgen.hpp"
#include "csde/solver.hpp"
#include "csde/theory.hpp"
#include "csde/tuning.hpp"
#include "csde/version.hpp"
#include "csde/weights.hpp"

namespace fs = std::filesystem;
using namespace csde;

namespace {

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Records every file a command writes so a failure can remove partial output.
class OutputGuard {
  public:
    explicit OutputGuard(const std::string& out_dir) : dir_(out_dir) {
        fs::create_directories(dir_);
    }
    std::string track(const std::string& name) {
        const std::string p = (fs::path(dir_) / name).string();
        paths_.push_back(p);
        return p;
    }
    void disarm() { armed_ = false; }
    ~OutputGuard() {
        if (!armed_) return;
        for (const std::string& p : paths_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }

  private:
    std::string dir_;
    std::vector<std::string> paths_;
    bool armed_ = true;
};

void emit_manifest(OutputGuard& guard, const std::string& command,
                   const std::string& config_path, std::uint64_t seed,
                   const std::string& out_dir) {
    RunManifest m;
    m.command = command;
    m.config_path = config_path;
    m.seed = seed;
    m.out_dir = out_dir;
    m.version = kVersion;
    m.timestamp = utc_now();
    write_manifest(guard.track("manifest.txt"), m);
}

struct FitArgs {
    std::string sample, dict, variant = "csde", out = ".";
    double lambda1 = 0.0, lambda2 = 0.0, delta = 0.0, B = 1.0;
    std::uint64_t seed = 0;
    bool renormalize = false, curve = false;
};

void run_fit(const FitArgs& a) {
    const std::vector<double> sample = read_sample(a.sample);
    const Dictionary dict = read_dict_spec(a.dict);
    const Variant variant = variant_from_string(a.variant);

    OutputGuard guard(a.out);
    FitResult fr;
    Eigen::VectorXd beta;
    auto solve_on = [&](const Dictionary& d) {
        if (a.delta > 0.0) {
            // Concentration-derived weights instead of the lambda mapping;
            // lambda2 doubles as the ridge coefficient c.
            const WeightSpec w =
                csde_weights(d, static_cast<int>(sample.size()), a.delta, a.lambda2, a.B);
            Problem p;
            p.beta_tilde = empirical_moments(d, sample);
            p.gram = gram(d).entries;
            p.omega = w.omega;
            p.c = a.lambda2;
            return fit(p);
        }
        return fit_variant(variant, sample, d, a.lambda1, a.lambda2);
    };

    if (a.renormalize) {
        const NormalizeResult nr = normalize(dict);
        fr = solve_on(nr.dict);
        beta = fr.beta_hat.cwiseProduct(nr.scales);
    } else {
        fr = solve_on(dict);
        beta = fr.beta_hat;
    }

    if (beta.cwiseAbs().maxCoeff() == 0.0)
        std::cerr << "warning: all coefficients are zero; the penalty may be too large\n";

    write_beta(guard.track("coefficients.txt"), beta);
    KktReport kkt;
    kkt.max_residual = fr.kkt_residuals.size() ? fr.kkt_residuals.maxCoeff() : 0.0;
    for (int j = 0; j < fr.kkt_residuals.size(); ++j)
        if (fr.kkt_residuals[j] > 1e-6) kkt.violations.push_back(j);
    write_fit_report(guard.track("fit_report.txt"), fr, kkt);
    if (a.curve) write_curve(guard.track("curve.csv"), dict, beta, nullptr);
    emit_manifest(guard, "fit", a.dict, a.seed, a.out);
    guard.disarm();

    std::cout << "fit: " << fr.support.size() << " of " << dict.size()
              << " atoms active, objective " << format_double(fr.objective)
              << (fr.converged ? "" : " (not converged)") << "\n";
}

struct SimArgs {
    std::string config, out = ".";
    std::int64_t seed = -1;
    int reps = 0;
};

void run_simulate(const SimArgs& a) {
    std::vector<SimulateRun> runs = read_simulate_config(a.config);
    std::uint64_t seed_used = runs.empty() ? 0 : runs.front().config.base_seed;
    for (SimulateRun& run : runs) {
        if (a.seed >= 0) run.config.base_seed = static_cast<std::uint64_t>(a.seed);
        if (a.reps > 0) run.config.N_reps = a.reps;
        seed_used = run.config.base_seed;
    }
    std::vector<ReplicationReport> reports;
    reports.reserve(runs.size());
    for (const SimulateRun& run : runs)
        reports.push_back(run_replications(run.config, run.estimators));

    OutputGuard guard(a.out);
    write_report_csv(guard.track("report.csv"), reports);
    emit_manifest(guard, "simulate", a.config, seed_used, a.out);
    guard.disarm();

    for (const ReplicationReport& r : reports)
        for (const EstimatorSummary& s : r.estimators)
            std::cout << to_string(r.family) << " W=" << r.W << " " << s.name
                      << ": l1 " << format_double(s.l1_mean) << " (sd "
                      << format_double(s.l1_std) << "), tv " << format_double(s.tv_mean)
                      << " (sd " << format_double(s.tv_std) << ")"
                      << (s.failures ? ", failures " + std::to_string(s.failures) : "")
                      << "\n";
}

struct DiagArgs {
    std::string dict, beta, beta_star, out = ".";
    int n = 100;
    double delta = 0.1, c = 0.0, B = 1.0, gamma = 0.5, eps_star = 0.0;
    std::uint64_t seed = 0;
};

void run_diagnose(const DiagArgs& a) {
    const Dictionary dict = read_dict_spec(a.dict);
    const Eigen::VectorXd beta = read_beta(a.beta);
    const Eigen::VectorXd beta_star = a.beta_star.empty() ? beta : read_beta(a.beta_star);
    if (beta.size() != dict.size() || beta_star.size() != dict.size())
        throw std::runtime_error("diagnose: coefficient length does not match the dictionary");

    const GramMatrix g = gram(dict);
    const WeightSpec w = csde_weights(dict, a.n, a.delta, a.c, a.B);
    const Eigen::VectorXd d = beta - beta_star;
    const double approx = std::max(0.0, d.dot(g.entries * d));
    const OracleDiagnostics diag = oracle_diagnostics(dict, g, beta, beta_star, w, approx, a.gamma);

    std::vector<std::pair<std::string, std::string>> extra;
    extra.emplace_back("approx_error", format_double(approx));
    extra.emplace_back("W", std::to_string(dict.size()));
    extra.emplace_back("n", std::to_string(a.n));
    extra.emplace_back("delta", format_double(a.delta));
    extra.emplace_back("gamma", format_double(a.gamma));
    if (a.eps_star >= 0.0 && a.eps_star < 1.0) {
        const double p = theorem3_probability(dict.size(), a.delta, a.eps_star);
        extra.emplace_back("support_recovery_probability", format_double(p));
        extra.emplace_back("support_recovery_vacuous", theorem3_vacuous(p) ? "true" : "false");
    } else {
        extra.emplace_back("support_recovery_probability", "not-applicable");
        extra.emplace_back("support_recovery_vacuous", "true");
    }

    OutputGuard guard(a.out);
    write_diagnostics(guard.track("diagnostics.txt"), diag, extra);
    emit_manifest(guard, "diagnose", a.dict, a.seed, a.out);
    guard.disarm();

    std::cout << "diagnose: W(beta)=" << diag.W_beta << ", condition_a="
              << (diag.condition_a ? "true" : "false") << ", condition_b="
              << (diag.condition_b ? "true" : "false") << "\n";
}

struct TuneArgs {
    std::string sample, dict, variant = "csde", out = ".";
    double l1_lo = 0.0, l1_hi = 0.5, l2_lo = 0.0, l2_hi = 0.1, xi = 0.001;
    std::uint64_t seed = 0;
};

void run_tune(const TuneArgs& a) {
    if (a.l1_hi < a.l1_lo || a.l2_hi < a.l2_lo)
        throw std::runtime_error("tune: range upper bound below lower bound");
    const std::vector<double> sample = read_sample(a.sample);
    const Dictionary dict = read_dict_spec(a.dict);
    const Variant variant = variant_from_string(a.variant);

    TuneConfig tc;
    tc.lambda1_range = {a.l1_lo, a.l1_hi};
    tc.lambda2_range = {a.l2_lo, a.l2_hi};
    tc.xi = a.xi;
    tc.seed = a.seed;
    const TuneResult tr = tune(tc, sample, dict, variant);

    OutputGuard guard(a.out);
    {
        std::ofstream out(guard.track("tune.txt"));
        if (!out) throw std::runtime_error("cannot write tune.txt");
        out << "lambda1=" << format_double(tr.lambda1) << "\n"
            << "lambda2=" << format_double(tr.lambda2) << "\n"
            << "score=" << format_double(tr.score) << "\n"
            << "converged=" << (tr.converged ? "true" : "false") << "\n"
            << "xi=" << format_double(a.xi) << "\n";
    }
    emit_manifest(guard, "tune", a.dict, a.seed, a.out);
    guard.disarm();

    std::cout << "tune: lambda1 " << format_double(tr.lambda1) << ", lambda2 "
              << format_double(tr.lambda2) << ", score " << format_double(tr.score) << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse mixture-density estimation from contaminated samples"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    FitArgs fit_args;
    CLI::App* cmd_fit = app.add_subcommand("fit", "Penalized density fit from a sample file");
    cmd_fit->add_option("--sample", fit_args.sample, "sample file, one observation per line")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_fit->add_option("--dict", fit_args.dict, "dictionary spec file")->required()
        ->check(CLI::ExistingFile);
    cmd_fit->add_option("--variant", fit_args.variant, "lasso|enet|adalasso|csde");
    cmd_fit->add_option("--lambda1", fit_args.lambda1, "l1 penalty level");
    cmd_fit->add_option("--lambda2", fit_args.lambda2, "l2 penalty level / ridge c");
    cmd_fit->add_option("--delta", fit_args.delta,
                        "confidence level; when set, use concentration weights");
    cmd_fit->add_option("--B", fit_args.B, "coefficient bound in the weight shift");
    cmd_fit->add_option("--seed", fit_args.seed, "recorded in the manifest");
    cmd_fit->add_option("--out", fit_args.out, "output directory");
    cmd_fit->add_flag("--renormalize", fit_args.renormalize,
                      "fit on the unit-norm dictionary, map coefficients back");
    cmd_fit->add_flag("--curve", fit_args.curve, "write the fitted density curve");
    cmd_fit->callback([&]() { run_fit(fit_args); });

    SimArgs sim_args;
    CLI::App* cmd_sim = app.add_subcommand("simulate", "Replicated synthetic experiments");
    cmd_sim->add_option("--config", sim_args.config, "experiment config file")->required()
        ->check(CLI::ExistingFile);
    cmd_sim->add_option("--seed", sim_args.seed, "override the config base seed");
    cmd_sim->add_option("--reps", sim_args.reps, "override the replication count")
        ->check(CLI::PositiveNumber);
    cmd_sim->add_option("--out", sim_args.out, "output directory");
    cmd_sim->callback([&]() { run_simulate(sim_args); });

    DiagArgs diag_args;
    CLI::App* cmd_diag = app.add_subcommand("diagnose", "Oracle-bound and condition report");
    cmd_diag->add_option("--dict", diag_args.dict, "dictionary spec file")->required()
        ->check(CLI::ExistingFile);
    cmd_diag->add_option("--beta", diag_args.beta, "coefficient file")->required()
        ->check(CLI::ExistingFile);
    cmd_diag->add_option("--beta-star", diag_args.beta_star,
                         "reference coefficients (defaults to --beta)")
        ->check(CLI::ExistingFile);
    cmd_diag->add_option("--n", diag_args.n, "sample size behind the fit")
        ->check(CLI::PositiveNumber);
    cmd_diag->add_option("--delta", diag_args.delta, "confidence level");
    cmd_diag->add_option("--lambda2", diag_args.c, "ridge coefficient c");
    cmd_diag->add_option("--B", diag_args.B, "coefficient bound in the weight shift");
    cmd_diag->add_option("--gamma", diag_args.gamma, "coherence budget in (0,1)");
    cmd_diag->add_option("--eps-star", diag_args.eps_star,
                         "normalized contamination bias for the recovery bound");
    cmd_diag->add_option("--seed", diag_args.seed, "recorded in the manifest");
    cmd_diag->add_option("--out", diag_args.out, "output directory");
    cmd_diag->callback([&]() { run_diagnose(diag_args); });

    TuneArgs tune_args;
    CLI::App* cmd_tune = app.add_subcommand("tune", "Split-stability search for the penalty levels");
    cmd_tune->add_option("--sample", tune_args.sample, "sample file")->required()
        ->check(CLI::ExistingFile);
    cmd_tune->add_option("--dict", tune_args.dict, "dictionary spec file")->required()
        ->check(CLI::ExistingFile);
    cmd_tune->add_option("--variant", tune_args.variant, "lasso|enet|adalasso|csde");
    cmd_tune->add_option("--l1-lo", tune_args.l1_lo, "lambda1 range low end");
    cmd_tune->add_option("--l1-hi", tune_args.l1_hi, "lambda1 range high end");
    cmd_tune->add_option("--l2-lo", tune_args.l2_lo, "lambda2 range low end");
    cmd_tune->add_option("--l2-hi", tune_args.l2_hi, "lambda2 range high end");
    cmd_tune->add_option("--xi", tune_args.xi, "search precision");
    cmd_tune->add_option("--seed", tune_args.seed, "split seed");
    cmd_tune->add_option("--out", tune_args.out, "output directory");
    cmd_tune->callback([&]() { run_tune(tune_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
