#pragma once
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "csde/dictionary.hpp"
#include "csde/solver.hpp"
#include "csde/weights.hpp"

namespace csde {

struct TuneConfig {
    std::pair<double, double> lambda1_range{0.0, 0.5};
    std::pair<double, double> lambda2_range{0.0, 0.1};
    double xi = 0.001;
    std::uint64_t seed = 0;
    int max_rounds = 20;
};

struct TuneResult {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double score = 0.0;
    bool converged = false;
};

// Uniformly random partition into halves of size floor(n/2) and ceil(n/2).
std::pair<std::vector<double>, std::vector<double>> cv_split(const std::vector<double>& sample,
                                                             std::uint64_t seed);

// Fits the variant on each half and returns the squared L2 distance between
// the two fitted densities, (b1-b2)' psi (b1-b2).  Both halves fitting to the
// zero vector means the penalty destroyed all signal; that degenerate case
// scores +infinity so the search never prefers it.
double cv_score(double lambda1, double lambda2, const std::vector<double>& sample,
                const Dictionary& dict, Variant variant, std::uint64_t seed);

// Alternating golden-section searches over lambda1 and lambda2, each run to
// precision xi, repeated until neither coordinate moves by more than xi or
// max_rounds is hit.  The score function is injectable for testing.
TuneResult tune(const TuneConfig& config,
                const std::function<double(double, double)>& score);

TuneResult tune(const TuneConfig& config, const std::vector<double>& sample,
                const Dictionary& dict, Variant variant);

} // namespace csde
