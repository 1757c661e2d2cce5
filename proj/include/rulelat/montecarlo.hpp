#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rulelat {

struct SimulationConfig {
    std::size_t n_trials = 100;
    std::size_t n_rules_max = 1000;
    double l_min = 0.01;             // 0 allowed: elimination never fires
    std::uint64_t master_seed = 1;
    bool incremental = true;         // reuse one coordinate pool per trial across N

    void validate() const;
};

struct SweepRow {
    std::size_t n_rules;
    double l_normal_sim;
    double l_threat_sim;
    double ratio;                    // l_threat_sim / l_normal_sim
};

struct SweepResult {
    SimulationConfig config;
    std::vector<SweepRow> rows;      // rows[k] holds N = k + 1
};

// Trial-averaged mean latitudes for N = 1..n_rules_max. Trial t draws from
// substream (master_seed, t) and partial sums are reduced in a fixed block
// order, so the result is bit-identical at any thread count (0 = hardware).
SweepResult run_sweep(const SimulationConfig& cfg, unsigned threads = 0);

// Latitudes pooled across independent trials at a fixed rule count.
struct SpacingSample {
    std::size_t n_rules = 0;
    std::size_t n_trials = 0;
    std::uint64_t seed = 0;
    std::vector<double> latitudes;   // ascending, (n_rules + 1) * n_trials values
    std::vector<double> grid;        // default CDF evaluation grid

    double empirical_cdf(double x) const;
    // Kolmogorov-Smirnov sup-distance against a reference CDF, evaluated at
    // the sample jump points.
    double ks_distance(const std::function<double(double)>& cdf) const;
};

SpacingSample spacing_distribution(std::size_t n_rules, std::size_t n_trials,
                                   std::uint64_t seed, unsigned threads = 0);

// Index of the minimum of a centered boxcar average (window clipped at the
// ends). Used to read the minimum off a noisy sweep curve.
std::size_t smoothed_argmin(std::span<const double> values, std::size_t window = 10);

} // namespace rulelat
