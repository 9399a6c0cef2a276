#pragma once
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace csde {

// splitmix64: used only to spread (base_seed, stream_index) into engine seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/**
 * Deterministic random source.
 *
 * The engine is std::mt19937_64 (its output stream is pinned by the C++
 * standard); all transforms below are hand-rolled so that generated samples
 * are bit-identical across platforms and standard libraries, which the
 * replication reports rely on.  std::*_distribution is deliberately avoided.
 */
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Independent stream for replication rep_index of a run seeded by base_seed.
    static Rng for_replication(std::uint64_t base_seed, std::uint64_t rep_index) {
        return Rng(splitmix64(base_seed ^ splitmix64(rep_index + 1)));
    }

    std::uint64_t raw() { return eng_(); }

    // Uniform on [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1]; safe as a log() argument.
    double uniform_pos() { return 1.0 - uniform(); }

    // Unbiased integer in [0, bound) by rejection.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do { x = eng_(); } while (x >= limit);
        return x % bound;
    }

    // Standard normal, Box-Muller (cosine branch; two uniforms per draw).
    double normal() {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    double normal(double mu, double sigma) { return mu + sigma * normal(); }

    // Gamma(shape, scale), Marsaglia-Tsang; shape<1 boosted via the U^{1/a} trick.
    double gamma(double shape, double scale) {
        if (!(shape > 0.0) || !(scale > 0.0))
            throw std::invalid_argument("Rng::gamma: shape and scale must be positive");
        if (shape < 1.0) {
            const double u = uniform_pos();
            return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_pos();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
        }
    }

    // Poisson by the multiplication method; exact and portable for lambda < 600.
    long long poisson(double lambda) {
        if (lambda < 0.0) throw std::invalid_argument("Rng::poisson: lambda must be >= 0");
        if (lambda == 0.0) return 0;
        if (lambda >= 600.0) throw std::invalid_argument("Rng::poisson: lambda too large for exact inversion");
        const double floor_p = std::exp(-lambda);
        long long k = 0;
        double prod = uniform_pos();
        while (prod > floor_p) {
            prod *= uniform_pos();
            ++k;
        }
        return k;
    }

    // NB with mean lambda, variance lambda + lambda^2/r, via the gamma-Poisson mixture.
    long long neg_binomial_mean(double r, double lambda) {
        if (!(r > 0.0) || !(lambda > 0.0))
            throw std::invalid_argument("Rng::neg_binomial_mean: r and lambda must be positive");
        return poisson(gamma(r, lambda / r));
    }

    // Index draw from a probability vector by CDF inversion.
    std::size_t categorical(const std::vector<double>& p) {
        const double u = uniform();
        double acc = 0.0;
        for (std::size_t j = 0; j + 1 < p.size(); ++j) {
            acc += p[j];
            if (u < acc) return j;
        }
        return p.empty() ? 0 : p.size() - 1;
    }

    // Fisher-Yates permutation of 0..n-1.
    std::vector<std::size_t> permutation(std::size_t n) {
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        for (std::size_t i = n; i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(idx[i - 1], idx[j]);
        }
        return idx;
    }

  private:
    std::mt19937_64 eng_;
};

} // namespace csde
