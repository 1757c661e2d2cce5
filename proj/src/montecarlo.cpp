#include "rulelat/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rulelat/errors.hpp"
#include "rulelat/rng.hpp"
#include "rulelat/spacing.hpp"
#include "parallel.hpp"

namespace rulelat {

namespace {

// Trials per reduction block. Fixed so the block partial sums, and therefore
// the reduced result, never depend on the thread count.
constexpr std::size_t kTrialBlock = 16;

// Inserts a fresh coordinate into the sorted pool, redrawing on an exact
// collision with an existing boundary.
void insert_boundary(std::vector<double>& sorted, Engine& rng) {
    double x = uniform_open_unit(rng);
    auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
    while (it != sorted.end() && *it == x) {
        x = uniform_open_unit(rng);
        it = std::lower_bound(sorted.begin(), sorted.end(), x);
    }
    sorted.insert(it, x);
}

// Draws n distinct coordinates into `out` (sorted). Whole-set redraw on the
// probability-zero duplicate collision.
void draw_sorted_boundaries(std::vector<double>& out, std::size_t n, Engine& rng) {
    for (;;) {
        out.clear();
        for (std::size_t i = 0; i < n; ++i) {
            out.push_back(uniform_open_unit(rng));
        }
        std::sort(out.begin(), out.end());
        if (std::adjacent_find(out.begin(), out.end()) == out.end()) {
            return;
        }
    }
}

struct BlockSums {
    std::vector<double> normal;
    std::vector<double> threat;
};

void accumulate_trial(const SimulationConfig& cfg, std::uint64_t trial,
                      std::vector<double>& pool, BlockSums& sums) {
    Engine rng = make_engine(cfg.master_seed, trial);
    if (cfg.incremental) {
        // One coordinate pool per trial; N grows by extending the sorted set.
        pool.clear();
        for (std::size_t n = 1; n <= cfg.n_rules_max; ++n) {
            insert_boundary(pool, rng);
            const auto scan = detail::scan_gaps(pool, cfg.l_min);
            sums.normal[n - 1] += scan.normal_mean;
            sums.threat[n - 1] += scan.threat_mean;
        }
    } else {
        for (std::size_t n = 1; n <= cfg.n_rules_max; ++n) {
            draw_sorted_boundaries(pool, n, rng);
            const auto scan = detail::scan_gaps(pool, cfg.l_min);
            sums.normal[n - 1] += scan.normal_mean;
            sums.threat[n - 1] += scan.threat_mean;
        }
    }
}

// Kahan-compensated accumulator for the cross-block reduction.
struct Compensated {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) {
        const double y = v - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

} // namespace

void SimulationConfig::validate() const {
    if (n_trials == 0) {
        throw ValidationError("n_trials must be >= 1");
    }
    if (n_rules_max == 0) {
        throw ValidationError("n_rules_max must be >= 1");
    }
    if (!(l_min >= 0.0 && l_min < 1.0)) {
        throw ValidationError("l_min must lie in [0,1), got " + std::to_string(l_min));
    }
}

SweepResult run_sweep(const SimulationConfig& cfg, unsigned threads) {
    cfg.validate();
    const std::size_t n_blocks = (cfg.n_trials + kTrialBlock - 1) / kTrialBlock;
    std::vector<BlockSums> blocks(n_blocks);

    detail::parallel_blocks(n_blocks, threads, [&] {
        return [&, pool = std::vector<double>()](std::size_t b) mutable {
            BlockSums& sums = blocks[b];
            sums.normal.assign(cfg.n_rules_max, 0.0);
            sums.threat.assign(cfg.n_rules_max, 0.0);
            pool.reserve(cfg.n_rules_max);
            const std::size_t first = b * kTrialBlock;
            const std::size_t last = std::min(cfg.n_trials, first + kTrialBlock);
            for (std::size_t trial = first; trial < last; ++trial) {
                accumulate_trial(cfg, trial, pool, sums);
            }
        };
    });

    SweepResult result;
    result.config = cfg;
    result.rows.resize(cfg.n_rules_max);
    const double inv_trials = 1.0 / static_cast<double>(cfg.n_trials);
    for (std::size_t i = 0; i < cfg.n_rules_max; ++i) {
        Compensated normal;
        Compensated threat;
        for (const BlockSums& b : blocks) {
            normal.add(b.normal[i]);
            threat.add(b.threat[i]);
        }
        SweepRow& row = result.rows[i];
        row.n_rules = i + 1;
        row.l_normal_sim = normal.sum * inv_trials;
        row.l_threat_sim = threat.sum * inv_trials;
        row.ratio = row.l_threat_sim / row.l_normal_sim;
    }
    return result;
}

double SpacingSample::empirical_cdf(double x) const {
    const auto it = std::upper_bound(latitudes.begin(), latitudes.end(), x);
    return static_cast<double>(it - latitudes.begin()) / static_cast<double>(latitudes.size());
}

double SpacingSample::ks_distance(const std::function<double(double)>& cdf) const {
    const std::size_t n = latitudes.size();
    double sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = cdf(latitudes[i]);
        const double above = static_cast<double>(i + 1) / static_cast<double>(n) - f;
        const double below = f - static_cast<double>(i) / static_cast<double>(n);
        sup = std::max(sup, std::max(above, below));
    }
    return sup;
}

SpacingSample spacing_distribution(std::size_t n_rules, std::size_t n_trials,
                                   std::uint64_t seed, unsigned threads) {
    if (n_trials == 0) {
        throw ValidationError("n_trials must be >= 1");
    }
    SpacingSample sample;
    sample.n_rules = n_rules;
    sample.n_trials = n_trials;
    sample.seed = seed;

    const std::size_t per_trial = n_rules + 1;
    sample.latitudes.assign(per_trial * n_trials, 0.0);

    constexpr std::size_t kBlock = 64;
    const std::size_t n_blocks = (n_trials + kBlock - 1) / kBlock;
    detail::parallel_blocks(n_blocks, threads, [&] {
        return [&, pool = std::vector<double>()](std::size_t b) mutable {
            const std::size_t first = b * kBlock;
            const std::size_t last = std::min(n_trials, first + kBlock);
            for (std::size_t trial = first; trial < last; ++trial) {
                Engine rng = make_engine(seed, trial);
                draw_sorted_boundaries(pool, n_rules, rng);
                double* out = sample.latitudes.data() + trial * per_trial;
                double prev = 0.0;
                for (std::size_t i = 0; i < n_rules; ++i) {
                    out[i] = pool[i] - prev;
                    prev = pool[i];
                }
                out[n_rules] = 1.0 - prev;
            }
        };
    });

    std::sort(sample.latitudes.begin(), sample.latitudes.end());

    // Default evaluation grid: 257 evenly spaced points covering the sample.
    const double top = sample.latitudes.back();
    constexpr std::size_t kGridPoints = 257;
    sample.grid.reserve(kGridPoints);
    for (std::size_t i = 0; i < kGridPoints; ++i) {
        sample.grid.push_back(top * static_cast<double>(i) / static_cast<double>(kGridPoints - 1));
    }
    return sample;
}

std::size_t smoothed_argmin(std::span<const double> values, std::size_t window) {
    if (values.empty()) {
        throw ValidationError("smoothed_argmin on empty range");
    }
    if (window == 0) {
        window = 1;
    }
    const std::size_t half_lo = window / 2;
    const std::size_t half_hi = (window - 1) / 2;
    std::size_t best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::size_t lo = i >= half_lo ? i - half_lo : 0;
        const std::size_t hi = std::min(values.size() - 1, i + half_hi);
        double acc = 0.0;
        for (std::size_t k = lo; k <= hi; ++k) {
            acc += values[k];
        }
        acc /= static_cast<double>(hi - lo + 1);
        if (acc < best_value) {
            best_value = acc;
            best = i;
        }
    }
    return best;
}

} // namespace rulelat
