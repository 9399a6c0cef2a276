#include "csde/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "csde/metrics.hpp"

namespace csde {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    return out;
}

[[noreturn]] void fail_at(const std::string& path, int line, const std::string& msg) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& path, int line, const std::string& token) {
    try {
        std::size_t used = 0;
        const double x = std::stod(token, &used);
        if (used != token.size()) fail_at(path, line, "trailing characters in number '" + token + "'");
        return x;
    } catch (const std::runtime_error&) {
        throw;
    } catch (const std::exception&) {
        fail_at(path, line, "not a number: '" + token + "'");
    }
}

long long parse_int(const std::string& path, int line, const std::string& token) {
    try {
        std::size_t used = 0;
        const long long x = std::stoll(token, &used);
        if (used != token.size()) fail_at(path, line, "trailing characters in integer '" + token + "'");
        return x;
    } catch (const std::runtime_error&) {
        throw;
    } catch (const std::exception&) {
        fail_at(path, line, "not an integer: '" + token + "'");
    }
}

// Flat key-value file: `key=value` lines, '#' comments, blank lines skipped.
class KvFile {
  public:
    explicit KvFile(const std::string& path) : path_(path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open " + path);
        std::string raw;
        int line = 0;
        while (std::getline(in, raw)) {
            ++line;
            const std::string s = trim(raw);
            if (s.empty() || s[0] == '#') continue;
            const auto eq = s.find('=');
            if (eq == std::string::npos) fail_at(path, line, "expected key=value");
            const std::string key = trim(s.substr(0, eq));
            if (key.empty()) fail_at(path, line, "empty key");
            if (entries_.count(key)) fail_at(path, line, "duplicate key '" + key + "'");
            entries_[key] = {trim(s.substr(eq + 1)), line};
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::string get(const std::string& key, const std::string& fallback = "") const {
        const auto it = entries_.find(key);
        return it == entries_.end() ? fallback : it->second.first;
    }

    std::string require(const std::string& key) const {
        const auto it = entries_.find(key);
        if (it == entries_.end())
            throw std::runtime_error(path_ + ": missing required key '" + key + "'");
        return it->second.first;
    }

    int line_of(const std::string& key) const {
        const auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.second;
    }

    double number(const std::string& key, double fallback) const {
        return has(key) ? parse_double(path_, line_of(key), get(key)) : fallback;
    }

    long long integer(const std::string& key, long long fallback) const {
        return has(key) ? parse_int(path_, line_of(key), get(key)) : fallback;
    }

    const std::string& path() const { return path_; }

    const std::map<std::string, std::pair<std::string, int>>& entries() const { return entries_; }

  private:
    std::string path_;
    std::map<std::string, std::pair<std::string, int>> entries_;
};

// A value list with run-length sugar: "1x20,0.8x6,1.2*" means twenty 1s,
// six 0.8s, then 1.2 repeated out to the requested length.
Eigen::VectorXd expand_values(const KvFile& kv, const std::string& key, int W) {
    const std::string text = kv.require(key);
    const int line = kv.line_of(key);
    std::vector<double> vals;
    bool filled = false;
    for (const std::string& tok : split(text, ',')) {
        if (tok.empty()) fail_at(kv.path(), line, "empty list entry in '" + key + "'");
        if (filled) fail_at(kv.path(), line, "'*' filler must be the last entry of '" + key + "'");
        if (tok.back() == '*') {
            const double v = parse_double(kv.path(), line, tok.substr(0, tok.size() - 1));
            if (W <= 0) fail_at(kv.path(), line, "'*' filler in '" + key + "' needs W");
            while (static_cast<int>(vals.size()) < W) vals.push_back(v);
            filled = true;
            continue;
        }
        const auto x = tok.find('x');
        if (x != std::string::npos) {
            const double v = parse_double(kv.path(), line, tok.substr(0, x));
            const long long reps = parse_int(kv.path(), line, tok.substr(x + 1));
            if (reps < 1) fail_at(kv.path(), line, "repeat count must be positive in '" + key + "'");
            vals.insert(vals.end(), static_cast<std::size_t>(reps), v);
        } else {
            vals.push_back(parse_double(kv.path(), line, tok));
        }
    }
    if (vals.size() == 1 && W > 1) vals.assign(static_cast<std::size_t>(W), vals[0]);
    if (W > 0 && static_cast<int>(vals.size()) != W)
        fail_at(kv.path(), line,
                key + " expands to " + std::to_string(vals.size()) + " entries, expected " +
                    std::to_string(W));
    return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

} // namespace

std::vector<double> read_sample(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sample file " + path);
    std::vector<double> xs;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        xs.push_back(parse_double(path, line, s));
    }
    if (xs.empty()) throw std::runtime_error(path + ": no observations");
    return xs;
}

Dictionary read_dict_spec(const std::string& path) {
    const KvFile kv(path);
    const std::string family = kv.require("family");
    const int W_key = static_cast<int>(kv.integer("W", 0));

    if (family == "gaussian" || family == "grid-gaussian") {
        Eigen::VectorXd mu;
        if (kv.has("mu")) {
            mu = expand_values(kv, "mu", W_key);
        } else {
            if (W_key <= 0) throw std::runtime_error(path + ": need W with the a-grid rule");
            const double a = kv.number("a", 1.0);
            mu = a * Eigen::VectorXd::LinSpaced(W_key, 1, W_key);
        }
        const int W = static_cast<int>(mu.size());
        if (family == "grid-gaussian" && split(kv.require("sigma"), ',').size() != 1)
            throw std::runtime_error(path + ": grid-gaussian takes a single bandwidth sigma");
        const Eigen::VectorXd sigma = expand_values(kv, "sigma", W);
        std::vector<BaseDensity> atoms;
        atoms.reserve(W);
        for (int j = 0; j < W; ++j) atoms.push_back(BaseDensity::gaussian(mu[j], sigma[j]));
        return Dictionary(std::move(atoms));
    }
    if (family == "poisson") {
        Eigen::VectorXd lambda;
        if (kv.has("lambda")) {
            lambda = expand_values(kv, "lambda", W_key);
        } else {
            if (W_key <= 0) throw std::runtime_error(path + ": need W with the a-grid rule");
            const double a = kv.number("a", 1.0);
            lambda = a * Eigen::VectorXd::LinSpaced(W_key, 1, W_key);
        }
        std::vector<BaseDensity> atoms;
        atoms.reserve(lambda.size());
        for (int j = 0; j < lambda.size(); ++j) atoms.push_back(BaseDensity::poisson(lambda[j]));
        return Dictionary(std::move(atoms));
    }
    throw std::runtime_error(path + ": unknown dictionary family '" + family + "'");
}

Eigen::VectorXd read_beta(const std::string& path) {
    const std::vector<double> xs = read_sample(path);
    return Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

void write_beta(const std::string& path, const Eigen::VectorXd& beta) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "# one coefficient per line\n";
    for (int j = 0; j < beta.size(); ++j) out << format_double(beta[j]) << "\n";
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

std::vector<EstimatorSpec> estimators_for_run(const KvFile& kv, const ExperimentConfig& cfg,
                                              bool lowdim) {
    const std::string def = lowdim ? "csde,em" : "lasso,enet,adalasso,csde";
    const std::string mode = kv.get("tune", lowdim ? "per-rep" : "fixed");
    if (mode != "fixed" && mode != "per-rep")
        throw std::runtime_error(kv.path() + ": tune must be 'fixed' or 'per-rep'");

    auto range_of = [&](const std::string& key, std::pair<double, double> fallback) {
        if (!kv.has(key)) return fallback;
        const auto parts = split(kv.get(key), ':');
        if (parts.size() != 2) fail_at(kv.path(), kv.line_of(key), key + " must be lo:hi");
        const double lo = parse_double(kv.path(), kv.line_of(key), parts[0]);
        const double hi = parse_double(kv.path(), kv.line_of(key), parts[1]);
        if (hi < lo) fail_at(kv.path(), kv.line_of(key), key + ": hi < lo");
        return std::make_pair(lo, hi);
    };

    TuneConfig tc;
    tc.lambda1_range = range_of("lambda1_range", tc.lambda1_range);
    tc.lambda2_range = range_of("lambda2_range", tc.lambda2_range);
    tc.xi = kv.number("xi", tc.xi);

    auto lambda_for = [&](const std::string& which, const std::string& est) {
        const std::string w = std::to_string(cfg.W);
        for (const std::string& key : {which + "." + est + "." + w, which + "." + est, which})
            if (kv.has(key)) return kv.number(key, 0.0);
        return 0.0;
    };

    std::vector<EstimatorSpec> specs;
    for (const std::string& name : split(kv.get("estimators", def), ',')) {
        if (name.empty()) continue;
        EstimatorSpec s;
        s.name = name;
        if (name != "em") {
            (void)variant_from_string(name); // validates
            s.tune_per_rep = mode == "per-rep";
            s.tune = tc;
            s.lambda1 = lambda_for("lambda1", name);
            s.lambda2 = lambda_for("lambda2", name);
        }
        specs.push_back(std::move(s));
    }
    if (specs.empty()) throw std::runtime_error(kv.path() + ": empty estimator list");
    return specs;
}

void apply_common(const KvFile& kv, ExperimentConfig& cfg) {
    cfg.n = static_cast<int>(kv.integer("n", cfg.n));
    cfg.N_reps = static_cast<int>(kv.integer("N_reps", cfg.N_reps));
    cfg.base_seed = static_cast<std::uint64_t>(kv.integer("base_seed", 1));
    cfg.inflation = kv.number("inflation", cfg.inflation);
    cfg.r = kv.number("r", cfg.r);
    if (kv.has("channel")) cfg.channel = channel_from_string(kv.get("channel"));
    if (cfg.N_reps < 1) throw std::runtime_error(kv.path() + ": N_reps must be >= 1");
    if (cfg.n < 1) throw std::runtime_error(kv.path() + ": n must be >= 1");
    const bool count_family = cfg.family == Family::poisson_mix;
    if (count_family && cfg.channel == Channel::variance_inflated)
        throw std::runtime_error(kv.path() + ": variance-inflated channel needs a continuous family");
    if (!count_family && cfg.channel == Channel::neg_binomial)
        throw std::runtime_error(kv.path() + ": neg-binomial channel needs the count family");
}

} // namespace

std::vector<SimulateRun> read_simulate_config(const std::string& path) {
    const KvFile kv(path);
    const std::string family = kv.require("family");

    std::vector<SimulateRun> runs;
    if (family == "lowdim" || family == "lowdim-1" || family == "lowdim-2" ||
        family == "lowdim-s1" || family == "lowdim-s2") {
        for (ExperimentConfig cfg : lowdim_configs()) {
            if (family == "lowdim-1" || family == "lowdim-s1")
                if (cfg.family != Family::lowdim_s1) continue;
            if (family == "lowdim-2" || family == "lowdim-s2")
                if (cfg.family != Family::lowdim_s2) continue;
            apply_common(kv, cfg);
            runs.push_back({cfg, estimators_for_run(kv, cfg, true)});
        }
        return runs;
    }

    const Family fam = family_from_string(family);
    std::vector<int> Ws;
    const std::string w_text = kv.get("W", "81");
    for (const std::string& tok : split(w_text, ','))
        Ws.push_back(static_cast<int>(parse_int(path, kv.line_of("W"), tok)));
    for (const int W : Ws) {
        ExperimentConfig cfg =
            fam == Family::poisson_mix ? poisson_config(W) : gaussian_config(W);
        apply_common(kv, cfg);
        runs.push_back({cfg, estimators_for_run(kv, cfg, false)});
    }
    return runs;
}

void write_report_csv(const std::string& path, const std::vector<ReplicationReport>& reports) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "family,estimator,W,n,lambda1,lambda2,l1_mean,l1_std,tv_mean,tv_std,"
           "support_exact_rate,failures\n";
    for (const ReplicationReport& rep : reports)
        for (const EstimatorSummary& s : rep.estimators)
            out << to_string(rep.family) << ',' << s.name << ',' << rep.W << ',' << rep.n << ','
                << format_double(s.lambda1_used) << ',' << format_double(s.lambda2_used) << ','
                << format_double(s.l1_mean) << ',' << format_double(s.l1_std) << ','
                << format_double(s.tv_mean) << ',' << format_double(s.tv_std) << ','
                << format_double(s.support_exact_rate) << ',' << s.failures << '\n';
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "command=" << manifest.command << "\n"
        << "config=" << manifest.config_path << "\n"
        << "seed=" << manifest.seed << "\n"
        << "out=" << manifest.out_dir << "\n"
        << "version=" << manifest.version << "\n"
        << "timestamp=" << manifest.timestamp << "\n";
}

void write_curve(const std::string& path, const Dictionary& dict,
                 const Eigen::VectorXd& beta_fit, const Eigen::VectorXd* beta_true,
                 int grid_points) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    auto mixture = [&](const Eigen::VectorXd& b, double x) {
        double s = 0.0;
        for (int j = 0; j < b.size(); ++j)
            if (b[j] != 0.0) s += b[j] * evaluate(dict.atoms[j], x);
        return s;
    };

    if (dict.domain() == Domain::continuous) {
        double lo = dict.atoms.front().mu, hi = dict.atoms.front().mu, smax = 0.0;
        for (const BaseDensity& a : dict.atoms) {
            lo = std::min(lo, a.mu);
            hi = std::max(hi, a.mu);
            smax = std::max(smax, a.sigma);
        }
        lo -= 8.0 * smax;
        hi += 8.0 * smax;
        out << (beta_true ? "x,density_true,density_fit\n" : "x,density\n");
        const double step = (hi - lo) / (grid_points - 1);
        for (int i = 0; i < grid_points; ++i) {
            const double x = lo + i * step;
            out << format_double(x) << ',';
            if (beta_true) out << format_double(mixture(*beta_true, x)) << ',';
            out << format_double(mixture(beta_fit, x)) << '\n';
        }
        return;
    }

    std::size_t kmax = 1;
    for (int j = 0; j < beta_fit.size(); ++j) {
        const bool used = beta_fit[j] != 0.0 || (beta_true && (*beta_true)[j] != 0.0);
        if (used) kmax = std::max(kmax, pmf_table(dict.atoms[j], 1e-12).size());
    }
    out << (beta_true ? "x,density_true,density_fit\n" : "x,density\n");
    for (std::size_t k = 0; k < kmax; ++k) {
        const double x = static_cast<double>(k);
        out << k << ',';
        if (beta_true) out << format_double(mixture(*beta_true, x)) << ',';
        out << format_double(mixture(beta_fit, x)) << '\n';
    }
}

void write_fit_report(const std::string& path, const FitResult& result, const KktReport& kkt) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "converged=" << (result.converged ? "true" : "false") << "\n"
        << "iterations=" << result.iterations << "\n"
        << "objective=" << format_double(result.objective) << "\n"
        << "support_size=" << result.support.size() << "\n";
    out << "support=";
    for (std::size_t i = 0; i < result.support.size(); ++i)
        out << (i ? "," : "") << result.support[i];
    out << "\n"
        << "max_kkt_residual=" << format_double(kkt.max_residual) << "\n"
        << "kkt_violations=" << kkt.violations.size() << "\n";
}

void write_diagnostics(const std::string& path, const OracleDiagnostics& diag,
                       const std::vector<std::pair<std::string, std::string>>& extra) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    auto row = [&](const std::string& key, double v) {
        out << key << '=';
        if (std::isfinite(v))
            out << format_double(v);
        else
            out << "not-applicable";
        out << '\n';
    };
    row("H", diag.H);
    row("F", diag.F);
    row("rho_star", diag.rho_star);
    out << "W_beta=" << diag.W_beta << "\n";
    row("lambda_W", diag.lambda_W);
    row("G", diag.G);
    row("G_star", diag.G_star);
    row("alpha_opt1", diag.alpha_opt1);
    row("alpha_opt2", diag.alpha_opt2);
    row("gamma_condition_lhs", diag.gamma_condition_lhs);
    out << "condition_a=" << (diag.condition_a ? "true" : "false") << "\n";
    out << "condition_b=" << (diag.condition_b ? "true" : "false") << "\n";
    row("bound_t1", diag.bound_t1);
    row("bound_t2", diag.bound_t2);
    row("bound_c1", diag.bound_c1);
    row("bound_c2", diag.bound_c2);
    for (const auto& [k, v] : extra) out << k << '=' << v << '\n';
}

} // namespace csde
