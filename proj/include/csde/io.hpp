#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "csde/dictionary.hpp"
#include "csde/simgen.hpp"
#include "csde/solver.hpp"
#include "csde/theory.hpp"

namespace csde {

/**
 * File formats.
 *
 * Sample file: one observation per line; blank lines and lines starting
 * with '#' are skipped; plain decimal point, no locale.
 *
 * Dictionary spec and experiment config: flat key-value text, one
 * `key=value` per line, '#' comments.  See the README for the schemas.
 *
 * Coefficient file: one coefficient per line, '#' comments allowed.
 */

std::vector<double> read_sample(const std::string& path);

Dictionary read_dict_spec(const std::string& path);

Eigen::VectorXd read_beta(const std::string& path);
void write_beta(const std::string& path, const Eigen::VectorXd& beta);

// One experiment to run plus the estimators (a config expands into several
// runs when it lists multiple W values or the paired small scenarios).
struct SimulateRun {
    ExperimentConfig config;
    std::vector<EstimatorSpec> estimators;
};

std::vector<SimulateRun> read_simulate_config(const std::string& path);

// Round-trippable decimal rendering; identical doubles give identical bytes.
std::string format_double(double x);

void write_report_csv(const std::string& path, const std::vector<ReplicationReport>& reports);

struct RunManifest {
    std::string command;
    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string version;
    std::string timestamp;
};

void write_manifest(const std::string& path, const RunManifest& manifest);

// Fitted (and optionally true) density sampled on the metric grid:
// `x,density` rows, or `x,density_true,density_fit` when truth is passed.
// Discrete dictionaries tabulate integer support points instead.
void write_curve(const std::string& path, const Dictionary& dict,
                 const Eigen::VectorXd& beta_fit, const Eigen::VectorXd* beta_true,
                 int grid_points = 20001);

void write_fit_report(const std::string& path, const FitResult& result,
                      const KktReport& kkt);

// Flat key-value rendering; non-finite entries print as not-applicable.
void write_diagnostics(const std::string& path, const OracleDiagnostics& diag,
                       const std::vector<std::pair<std::string, std::string>>& extra);

} // namespace csde
