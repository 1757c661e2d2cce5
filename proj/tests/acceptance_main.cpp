// Acceptance suite: one pass/fail line per criterion. Criteria are numbered
// and each pins its tolerances in code; run a single criterion with
// `acceptance --criterion K`. `--cli PATH` points at the command-line binary
// exercised by the determinism criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "rulelat/analytic.hpp"
#include "rulelat/errors.hpp"
#include "rulelat/io.hpp"
#include "rulelat/lattice.hpp"
#include "rulelat/montecarlo.hpp"
#include "rulelat/rng.hpp"
#include "rulelat/spacing.hpp"
#include "oracles.hpp"

using namespace rulelat;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& what) {
        detail += (detail.empty() ? "" : "; ") + what;
    }
};

std::string cli_path;   // set from --cli

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.4g", v);
    return buffer;
}

SweepResult reference_sweep() {
    SimulationConfig cfg;   // trials=100, n_max=1000, l_min=0.01, seed=1
    return run_sweep(cfg);
}

// 1. Latitude sweep: normal curve identity, threat minimum location, runtime.
Outcome criterion_1() {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    const SweepResult result = reference_sweep();
    const double elapsed = seconds_since(start);

    double worst = 0.0;
    std::vector<double> threat;
    threat.reserve(result.rows.size());
    for (const SweepRow& row : result.rows) {
        worst = std::max(worst, std::abs(row.l_normal_sim -
                                         1.0 / static_cast<double>(row.n_rules + 1)));
        threat.push_back(row.l_threat_sim);
    }
    out.require(worst <= 1e-9, "normal-curve deviation " + fmt(worst) + " > 1e-9");
    out.note("max |l_normal - 1/(N+1)| = " + fmt(worst));

    const std::size_t n_star = smoothed_argmin(threat, 10) + 1;
    out.require(n_star >= 80 && n_star <= 120,
                "smoothed minimum at N = " + std::to_string(n_star) + " outside [80,120]");
    out.note("smoothed threat minimum at N = " + std::to_string(n_star));

    // Shape: falls into the minimum, rises past it.
    const double at_min = threat[n_star - 1];
    out.require(threat[0] > 1.5 * at_min, "no decrease into the minimum");
    out.require(threat.back() > 10.0 * at_min, "no increase past the minimum");

    out.require(elapsed < 60.0, "runtime " + fmt(elapsed) + "s >= 60s");
    out.note("runtime " + fmt(elapsed) + "s");
    return out;
}

// 2. Threat/normal ratio at N = 100 and N = 1000.
Outcome criterion_2() {
    Outcome out;
    const SweepResult result = reference_sweep();
    const double at_100 = result.rows[99].ratio;
    const double at_1000 = result.rows[999].ratio;
    out.require(at_100 >= 2.2 && at_100 <= 3.3,
                "ratio(100) = " + fmt(at_100) + " outside [2.2, 3.3]");
    out.require(at_1000 > 100.0, "ratio(1000) = " + fmt(at_1000) + " <= 100");
    out.note("ratio(100) = " + fmt(at_100) + ", ratio(1000) = " + fmt(at_1000));
    return out;
}

// 3. Model comparison: simulated threat curve against the closed form, and
// percolation-vs-exact minima.
Outcome criterion_3() {
    Outcome out;
    const SweepResult result = reference_sweep();
    double worst = 0.0;
    std::size_t worst_at = 0;
    for (const SweepRow& row : result.rows) {
        const double exact =
            exact_threat_latitude(static_cast<double>(row.n_rules), result.config.l_min);
        const double dev = std::abs(row.l_threat_sim - exact) / exact;
        if (dev > worst) {
            worst = dev;
            worst_at = row.n_rules;
        }
    }
    out.require(worst <= 0.15, "max |sim - exact|/exact = " + fmt(worst) + " at N = " +
                                   std::to_string(worst_at) + " exceeds 0.15");
    out.note("max relative deviation " + fmt(worst) + " at N = " + std::to_string(worst_at) +
             " (trial mean of 1/(K+1) sits above 1/(E[K]+1) where the expected "
             "survivor count is O(1))");

    std::vector<double> exact_curve;
    std::vector<double> perc_curve;
    for (std::size_t n = 1; n <= 1000; ++n) {
        exact_curve.push_back(exact_threat_latitude(static_cast<double>(n), 0.01));
        perc_curve.push_back(percolation_threat_latitude(static_cast<double>(n), 0.01));
    }
    const auto argmin = [](const std::vector<double>& v) {
        return static_cast<double>(std::min_element(v.begin(), v.end()) - v.begin()) + 1.0;
    };
    const double loc_ratio = argmin(exact_curve) / argmin(perc_curve);
    const double val_ratio = *std::min_element(exact_curve.begin(), exact_curve.end()) /
                             *std::min_element(perc_curve.begin(), perc_curve.end());
    const auto within_2 = [](double r) { return r <= 2.0 && r >= 0.5; };
    out.require(within_2(loc_ratio), "minima locations differ by " + fmt(loc_ratio));
    out.require(within_2(val_ratio), "minima values differ by " + fmt(val_ratio));
    out.note("percolation/exact minima: location ratio " + fmt(loc_ratio) + ", value ratio " +
             fmt(val_ratio));
    return out;
}

// 4. Closed-form identities.
Outcome criterion_4() {
    Outcome out;
    for (const double lmin : {0.001, 0.01, 0.1, 0.5}) {
        out.require(exact_threat_latitude(0.0, lmin) == 1.0, "L(0, l_min) != 1");
    }
    for (const double n : {1.0, 10.0, 500.0}) {
        out.require(std::abs(exact_threat_latitude(n, 0.0) - 1.0 / (n + 1.0)) < 1e-15,
                    "L(N, 0) != 1/(N+1)");
    }
    for (const double lmin : {0.1, 0.01, 0.001}) {
        const long long expected = std::llround(1.0 / lmin);
        long long best = 1;
        double best_value = exact_threat_latitude(1.0, lmin);
        for (long long n = 2; n <= 3 * expected; ++n) {
            const double v = exact_threat_latitude(static_cast<double>(n), lmin);
            if (v < best_value) {
                best_value = v;
                best = n;
            }
        }
        out.require(std::llabs(best - expected) <= 1,
                    "integer minimizer " + std::to_string(best) + " not within 1 of " +
                        std::to_string(expected));
    }
    const auto m = min_threat_latitude(0.01);
    const double gap = std::abs(m.exact - m.approx) / m.approx;
    out.require(gap < 0.02, "asymptote gap " + fmt(gap) + " >= 2%");
    out.note("minimum " + fmt(m.exact) + " vs e*l_min " + fmt(m.approx) + " (gap " +
             fmt(100.0 * gap) + "%)");
    return out;
}

// 5. Pooled spacing CDF against the exponential model.
Outcome criterion_5() {
    Outcome out;
    // Oracle first: the exact finite-N spacing law (1-L)^N stays close to
    // the exponential model, so the sampled test below is meaningful.
    double law_gap = 0.0;
    for (int i = 0; i <= 100000; ++i) {
        const double latitude = static_cast<double>(i) / 100000.0;
        law_gap = std::max(law_gap, std::abs(std::pow(1.0 - latitude, 100.0) -
                                             std::exp(-101.0 * latitude)));
    }
    out.require(law_gap < 0.01, "exact law vs exponential sup-gap " + fmt(law_gap));
    out.note("analytic sup-gap " + fmt(law_gap));

    const SpacingSample sample = spacing_distribution(100, 10000, 1);
    const double ks = sample.ks_distance(
        [](double x) { return 1.0 - std::exp(-101.0 * x); });
    out.require(ks < 0.02, "KS distance " + fmt(ks) + " >= 0.02");
    out.note("KS distance " + fmt(ks) + " over " + std::to_string(sample.latitudes.size()) +
             " pooled latitudes");
    return out;
}

// 6. Ring cluster sizes against (1+p)/(1-p).
Outcome criterion_6() {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    const Lattice ring = build_lattice(LatticeGeometry::ring(1000000));
    double worst = 0.0;
    for (const double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const double expected = (1.0 + p) / (1.0 - p);
        const double measured = empirical_mean_cluster_size(ring, p, 4, 6);
        const double dev = std::abs(measured - expected) / expected;
        worst = std::max(worst, dev);
        out.require(dev < 0.05, "p = " + fmt(p) + ": measured " + fmt(measured) +
                                    " vs " + fmt(expected));
    }
    const double elapsed = seconds_since(start);
    out.require(elapsed < 30.0, "runtime " + fmt(elapsed) + "s >= 30s");
    out.note("worst relative deviation " + fmt(worst) + ", runtime " + fmt(elapsed) + "s");
    return out;
}

// 7. Threshold table at desk scale.
Outcome criterion_7() {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();

    const auto check_band = [&](const LatticeGeometry& g, std::size_t trials,
                                double reference, double tolerance) {
        const ThresholdEstimate est = estimate_threshold(g, trials, 2026);
        const double err = std::abs(est.p_c - reference);
        out.require(err <= tolerance, std::string(to_string(g.kind)) + " estimate " +
                                          fmt(est.p_c) + " misses " + fmt(reference) +
                                          " by " + fmt(err));
        out.note(std::string(to_string(g.kind)) + " " + fmt(est.p_c));
    };
    check_band(LatticeGeometry::square(128), 300, 0.593, 0.02);
    check_band(LatticeGeometry::triangular(128), 300, 0.5, 0.02);
    check_band(LatticeGeometry::simple_cubic(32), 300, 0.312, 0.02);

    const ThresholdEstimate bethe3 = estimate_threshold(LatticeGeometry::bethe(3, 4), 10, 1);
    out.require(bethe3.p_c == 0.5, "bethe(3) != 1/2");
    const ThresholdEstimate bethe4 = estimate_threshold(LatticeGeometry::bethe(4, 4), 10, 1);
    out.require(bethe4.p_c == 1.0 / 3.0, "bethe(4) != 1/3");

    const ThresholdEstimate line = estimate_threshold(LatticeGeometry::linear(10000), 300, 3);
    out.require(line.p_c > 0.99, "linear estimate " + fmt(line.p_c) + " <= 0.99");
    out.note("linear-1d " + fmt(line.p_c));

    const double elapsed = seconds_since(start);
    out.require(elapsed < 300.0, "runtime " + fmt(elapsed) + "s >= 300s");
    out.note("runtime " + fmt(elapsed) + "s");
    return out;
}

// 8. Oracle equivalence: elimination scheme and cluster labeling.
Outcome criterion_8() {
    Outcome out;
    Engine rng = make_engine(2718, 0);
    std::size_t checked = 0;
    for (int round = 0; round < 1000; ++round) {
        const std::size_t n = static_cast<std::size_t>(rng() % 200);
        std::vector<double> xs;
        do {
            xs.clear();
            for (std::size_t i = 0; i < n; ++i) {
                xs.push_back(uniform_open_unit(rng));
            }
            std::sort(xs.begin(), xs.end());
        } while (std::adjacent_find(xs.begin(), xs.end()) != xs.end());
        const double lmin = 0.001 + 0.5 * uniform_unit(rng);

        const auto expected = oracles::reference_threat_boundaries(xs, lmin);
        const BoundarySet kept =
            eliminate_crossable_boundaries(BoundarySet(xs), MinLatitude(lmin));
        std::vector<double> actual{0.0};
        for (const double x : kept.interior()) {
            actual.push_back(x);
        }
        actual.push_back(1.0);
        if (actual != expected) {
            out.require(false, "elimination mismatch on instance " + std::to_string(round));
            break;
        }
        ++checked;
    }
    out.require(checked == 1000, "only " + std::to_string(checked) + " instances checked");
    out.note(std::to_string(checked) + " elimination instances matched");

    std::size_t patterns = 0;
    for (const LatticeGeometry& g :
         {LatticeGeometry::linear(5), LatticeGeometry::ring(5), LatticeGeometry::square(3),
          LatticeGeometry::triangular(3), LatticeGeometry::honeycomb(3),
          LatticeGeometry::simple_cubic(2), LatticeGeometry::bethe(3, 2),
          LatticeGeometry::square(4)}) {
        const Lattice lattice = build_lattice(g);
        const std::uint32_t all = 1u << lattice.site_count();
        for (std::uint32_t mask = 0; mask < all; ++mask) {
            Occupancy occ;
            occ.occupied.assign(lattice.site_count(), 0);
            for (std::size_t s = 0; s < lattice.site_count(); ++s) {
                occ.occupied[s] = (mask >> s) & 1u;
                occ.occupied_count += occ.occupied[s];
            }
            ClusterStats stats = label_clusters(lattice, occ);
            std::sort(stats.sizes.begin(), stats.sizes.end());
            const auto brute = oracles::brute_force_clusters(lattice, occ.occupied);
            if (stats.sizes != brute.sizes || stats.spanning != brute.spanning) {
                out.require(false, std::string("labeling mismatch on ") +
                                       to_string(g.kind) + " mask " + std::to_string(mask));
                return out;
            }
            ++patterns;
        }
    }
    out.note(std::to_string(patterns) + " occupancy patterns matched");
    return out;
}

// 9. Determinism of library results and CLI artifacts across thread counts.
Outcome criterion_9() {
    Outcome out;

    SimulationConfig cfg;
    cfg.n_trials = 40;
    cfg.n_rules_max = 120;
    cfg.master_seed = 31;
    const SweepResult a = run_sweep(cfg, 1);
    const SweepResult b = run_sweep(cfg, 2);
    bool same = a.rows.size() == b.rows.size();
    for (std::size_t i = 0; same && i < a.rows.size(); ++i) {
        same = a.rows[i].l_normal_sim == b.rows[i].l_normal_sim &&
               a.rows[i].l_threat_sim == b.rows[i].l_threat_sim;
    }
    out.require(same, "run_sweep differs across thread counts");
    out.require(io::sweep_csv(a) == io::sweep_csv(b), "sweep CSV differs across thread counts");

    if (cli_path.empty() || !fs::exists(cli_path)) {
        out.require(false, "CLI binary not found (pass --cli PATH)");
        return out;
    }

    const fs::path dir = fs::temp_directory_path() / "rulelat_acceptance";
    fs::create_directories(dir);
    const auto read_file = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    };
    const auto run = [&](const std::string& args) {
        const std::string command = "\"" + cli_path + "\" " + args + " 2>/dev/null";
        return std::system(command.c_str());
    };

    const fs::path csv_1 = dir / "sweep_t1.csv";
    const fs::path csv_2 = dir / "sweep_t2.csv";
    const std::string sweep_args = "sweep --trials 10 --n-max 80 --l-min 0.01 --seed 7";
    int rc = run(sweep_args + " --threads 1 --out " + csv_1.string());
    rc |= run(sweep_args + " --threads 2 --out " + csv_2.string());
    out.require(rc == 0, "CLI sweep returned nonzero");
    out.require(!read_file(csv_1).empty() && read_file(csv_1) == read_file(csv_2),
                "CLI sweep bytes differ across thread counts");

    const fs::path json_1 = dir / "sweep_a.json";
    const fs::path json_2 = dir / "sweep_b.json";
    rc = run(sweep_args + " --threads 2 --format json --out " + json_1.string());
    rc |= run(sweep_args + " --threads 1 --format json --out " + json_2.string());
    out.require(rc == 0 && read_file(json_1) == read_file(json_2),
                "CLI sweep JSON differs across thread counts");

    const fs::path th_1 = dir / "th_a.csv";
    const fs::path th_2 = dir / "th_b.csv";
    const std::string th_args =
        "lattice-threshold --geometry square-2d --side 24 --trials 40 --seed 5";
    rc = run(th_args + " --threads 1 --out " + th_1.string());
    rc |= run(th_args + " --threads 2 --out " + th_2.string());
    out.require(rc == 0 && !read_file(th_1).empty() && read_file(th_1) == read_file(th_2),
                "CLI threshold bytes differ across thread counts");

    const fs::path cls_1 = dir / "c_a.json";
    const fs::path cls_2 = dir / "c_b.json";
    rc = run("classify --n 100 --l-min 0.01 --format json --out " + cls_1.string());
    rc |= run("classify --n 100 --l-min 0.01 --format json --out " + cls_2.string());
    out.require(rc == 0 && read_file(cls_1) == read_file(cls_2), "CLI classify not reproducible");

    // The config echo in the CSV header must reproduce the run losslessly.
    {
        std::istringstream header(read_file(csv_1));
        std::string line;
        std::string config_text;
        while (std::getline(header, line) && line.rfind("# ", 0) == 0) {
            if (line.rfind("# tool", 0) != 0) {
                config_text += line.substr(2) + "\n";
            }
        }
        const fs::path cfg_path = dir / "rerun.cfg";
        io::write_file(cfg_path.string(), config_text);
        const fs::path rerun_csv = dir / "rerun.csv";
        rc = run("sweep --config " + cfg_path.string() + " --out " + rerun_csv.string());
        out.require(rc == 0 && read_file(rerun_csv) == read_file(csv_1),
                    "config round-trip did not reproduce the sweep artifact");
    }

    // Exit codes: invalid config and numerical divergence.
    const int bad = run("sweep --l-min 2.0 --trials 2 --n-max 4");
    out.require(WIFEXITED(bad) && WEXITSTATUS(bad) == 2,
                "invalid config exit code " + std::to_string(WEXITSTATUS(bad)) + " != 2");
    const int divergent = run("exact --n 100000 --l-min 0.9");
    out.require(WIFEXITED(divergent) && WEXITSTATUS(divergent) == 3,
                "divergence exit code " + std::to_string(WEXITSTATUS(divergent)) + " != 3");

    fs::remove_all(dir);
    out.note("library and CLI artifacts byte-identical at 1 and 2 threads");
    return out;
}

struct Criterion {
    int number;
    const char* name;
    std::function<Outcome()> run;
};

const Criterion kCriteria[] = {
    {1, "latitude sweep reproduction", criterion_1},
    {2, "threat-to-normal ratio", criterion_2},
    {3, "simulation vs closed-form comparison", criterion_3},
    {4, "closed-form identities", criterion_4},
    {5, "spacing CDF vs exponential model", criterion_5},
    {6, "1d ring cluster-size law", criterion_6},
    {7, "threshold table validation", criterion_7},
    {8, "oracle equivalence", criterion_8},
    {9, "determinism", criterion_9},
};

} // namespace

int main(int argc, char** argv) {
    int selected = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            selected = std::atoi(argv[++i]);
        } else if (arg == "--cli" && i + 1 < argc) {
            cli_path = argv[++i];
        } else {
            std::fprintf(stderr, "usage: acceptance [--criterion K] [--cli PATH]\n");
            return 2;
        }
    }
    if (cli_path.empty()) {
        const fs::path guess = fs::path(argv[0]).parent_path() / "rulelat";
        if (fs::exists(guess)) {
            cli_path = guess.string();
        }
    }

    int failures = 0;
    for (const Criterion& criterion : kCriteria) {
        if (selected != 0 && criterion.number != selected) {
            continue;
        }
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %d: %s -- %s\n", outcome.pass ? "PASS" : "FAIL",
                    criterion.number, criterion.name, outcome.detail.c_str());
        std::fflush(stdout);
        failures += outcome.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
