// rulelat: latitude-vs-rules sweeps, closed-form model evaluation, and
// finite-lattice percolation thresholds, with plot-ready CSV/JSON output.

#include <cstdint>
#include <exception>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "rulelat/analytic.hpp"
#include "rulelat/errors.hpp"
#include "rulelat/io.hpp"
#include "rulelat/lattice.hpp"
#include "rulelat/montecarlo.hpp"
#include "rulelat/regime.hpp"

namespace {

using namespace rulelat;

constexpr int kExitOk = 0;
constexpr int kExitInvalidConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

struct OutputOptions {
    std::string format = "csv";
    std::string out;   // empty = stdout
};

void add_output_options(CLI::App& cmd, OutputOptions& opts,
                        const std::string& default_format = "csv") {
    opts.format = default_format;
    cmd.add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"csv", "json", "text"}))
        ->capture_default_str();
    cmd.add_option("--out", opts.out, "Output path (default: stdout)");
}

void emit(const OutputOptions& opts, const std::string& contents) {
    if (opts.out.empty()) {
        std::cout << contents;
    } else {
        io::write_file(opts.out, contents);
    }
}

// Applies config-file values to options the user did not pass explicitly.
// Keys match the config echo embedded in the artifacts.
struct ConfigOverlay {
    std::map<std::string, std::function<void(const std::string&)>> setters;
    std::map<std::string, CLI::Option*> options;

    void bind(const std::string& key, CLI::Option* opt,
              std::function<void(const std::string&)> set) {
        setters[key] = std::move(set);
        options[key] = opt;
    }

    void apply(const std::string& path) const {
        if (path.empty()) {
            return;
        }
        for (const auto& [key, value] : io::parse_config_file(path)) {
            if (key == "tool") {
                continue;
            }
            const auto setter = setters.find(key);
            if (setter == setters.end()) {
                throw ValidationError("unknown config key: " + key);
            }
            const auto opt = options.find(key);
            if (opt->second != nullptr && opt->second->count() > 0) {
                continue;   // explicit flag wins
            }
            setter->second(value);
        }
    }
};

std::uint64_t parse_u64(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(value, &used);
        if (used != value.size()) {
            throw std::invalid_argument(value);
        }
        return v;
    } catch (const std::exception&) {
        throw ValidationError("bad integer for " + key + ": " + value);
    }
}

double parse_f64(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) {
            throw std::invalid_argument(value);
        }
        return v;
    } catch (const std::exception&) {
        throw ValidationError("bad number for " + key + ": " + value);
    }
}

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1") {
        return true;
    }
    if (value == "false" || value == "0") {
        return false;
    }
    throw ValidationError("bad boolean for " + key + ": " + value);
}

// --- sweep ---------------------------------------------------------------

struct SweepArgs {
    SimulationConfig cfg;
    unsigned threads = 0;
    std::string config_path;
    OutputOptions out;
    ConfigOverlay overlay;
};

void setup_sweep(CLI::App& app, SweepArgs& args) {
    CLI::App* cmd = app.add_subcommand(
        "sweep", "Trial-averaged normal/threat latitudes over N = 1..n_max");
    auto* trials = cmd->add_option("--trials", args.cfg.n_trials, "Trials to average")
                       ->capture_default_str();
    auto* nmax = cmd->add_option("--n-max", args.cfg.n_rules_max, "Largest rule count")
                     ->capture_default_str();
    auto* lmin = cmd->add_option("--l-min", args.cfg.l_min, "Minimum workable latitude")
                     ->capture_default_str();
    auto* seed = cmd->add_option("--seed", args.cfg.master_seed, "Master seed")
                     ->capture_default_str();
    auto* independent =
        cmd->add_flag("--independent", "Draw fresh coordinates for every N "
                                       "instead of growing one pool per trial");
    cmd->add_option("--threads", args.threads, "Worker threads (0 = auto)")
        ->capture_default_str();
    cmd->add_option("--config", args.config_path, "Flat key = value config file");
    add_output_options(*cmd, args.out);

    args.overlay.bind("trials", trials,
                      [&args](const std::string& v) { args.cfg.n_trials = parse_u64(v, "trials"); });
    args.overlay.bind("n_rules_max", nmax,
                      [&args](const std::string& v) { args.cfg.n_rules_max = parse_u64(v, "n_rules_max"); });
    args.overlay.bind("l_min", lmin,
                      [&args](const std::string& v) { args.cfg.l_min = parse_f64(v, "l_min"); });
    args.overlay.bind("seed", seed,
                      [&args](const std::string& v) { args.cfg.master_seed = parse_u64(v, "seed"); });
    args.overlay.bind("incremental", independent, [&args](const std::string& v) {
        args.cfg.incremental = parse_bool(v, "incremental");
    });

    cmd->callback([&args, independent] {
        if (independent->count() > 0) {
            args.cfg.incremental = false;
        }
        args.overlay.apply(args.config_path);
        const SweepResult result = run_sweep(args.cfg, args.threads);
        emit(args.out, args.out.format == "json" ? io::sweep_json(result)
                                                 : io::sweep_csv(result));

        std::vector<double> threat;
        threat.reserve(result.rows.size());
        for (const SweepRow& row : result.rows) {
            threat.push_back(row.l_threat_sim);
        }
        const std::size_t n_star = smoothed_argmin(threat) + 1;
        std::cerr << "sweep: smoothed threat minimum at N = " << n_star
                  << " (n_min = " << io::format_double(n_min(args.cfg.l_min))
                  << " for l_min = " << io::format_double(args.cfg.l_min) << ")\n";
    });
}

// --- exact ---------------------------------------------------------------

struct ExactArgs {
    double n = 0.0;
    double l_min = 0.01;
    OutputOptions out;
};

void setup_exact(CLI::App& app, ExactArgs& args) {
    CLI::App* cmd = app.add_subcommand("exact", "Closed-form model values at one (N, l_min)");
    cmd->add_option("--n", args.n, "Rule count")->required();
    cmd->add_option("--l-min", args.l_min, "Minimum workable latitude")->capture_default_str();
    add_output_options(*cmd, args.out, "text");

    cmd->callback([&args] {
        const RegimeReport report = classify(args.n, args.l_min);
        const io::ConfigDoc doc{
            {"n_rules", io::format_double(args.n)},
            {"l_min", io::format_double(args.l_min)},
            {"occupation_probability", io::format_double(occupation_probability(args.n, args.l_min))},
            {"l_exact", io::format_double(exact_threat_latitude(args.n, args.l_min))},
            {"l_percolation", io::format_double(percolation_threat_latitude(args.n, args.l_min))},
            {"threat_boundaries_expected",
             io::format_double(threat_boundary_count_expected(args.n, args.l_min))},
            {"n_min", io::format_double(n_min(args.l_min))},
            {"l_normal", io::format_double(report.l_normal)},
            {"regime", to_string(report.regime)},
        };
        if (args.out.format == "json") {
            std::string json = "{\n";
            for (std::size_t i = 0; i < doc.size(); ++i) {
                const bool numeric = doc[i].first != "regime";
                json += "  \"" + doc[i].first + "\": ";
                json += numeric ? doc[i].second : "\"" + doc[i].second + "\"";
                json += i + 1 < doc.size() ? ",\n" : "\n";
            }
            json += "}\n";
            emit(args.out, json);
        } else {
            emit(args.out, io::serialize_config(doc));
        }
    });
}

// --- lattice-threshold ---------------------------------------------------

struct LatticeArgs {
    std::string geometry = "square-2d";
    std::size_t side = 0;
    std::size_t generations = 0;
    unsigned z = 3;
    std::size_t trials = 300;
    std::uint64_t seed = 1;
    std::size_t max_steps = 16;
    double tolerance = 2.5e-4;
    unsigned threads = 0;
    OutputOptions out;
};

LatticeGeometry geometry_from_args(const LatticeArgs& args) {
    LatticeGeometry g;
    g.kind = lattice_kind_from_string(args.geometry);
    g.side = args.side;
    g.generations = args.generations;
    g.bethe_z = args.z;
    return g;
}

void setup_lattice(CLI::App& app, LatticeArgs& args) {
    CLI::App* cmd = app.add_subcommand(
        "lattice-threshold", "Estimate a site-percolation threshold by bisection");
    cmd->add_option("--geometry", args.geometry, "Lattice kind")->capture_default_str();
    cmd->add_option("--side", args.side, "Sites per axis (regular lattices)");
    cmd->add_option("--generations", args.generations, "Bethe shells");
    cmd->add_option("--z", args.z, "Bethe coordination")->capture_default_str();
    cmd->add_option("--trials", args.trials, "Trials per bisection step")->capture_default_str();
    cmd->add_option("--seed", args.seed, "Master seed")->capture_default_str();
    cmd->add_option("--max-steps", args.max_steps, "Bisection depth limit")->capture_default_str();
    cmd->add_option("--tolerance", args.tolerance, "Target half-width")->capture_default_str();
    cmd->add_option("--threads", args.threads, "Worker threads (0 = auto)")->capture_default_str();
    add_output_options(*cmd, args.out);

    cmd->callback([&args] {
        const LatticeGeometry g = geometry_from_args(args);
        io::ThresholdReport report;
        report.geometry = g;
        report.estimate = estimate_threshold(g, args.trials, args.seed, args.max_steps,
                                             args.tolerance, args.threads);
        report.reference_p_c = reference_threshold(g);
        report.seed = args.seed;
        emit(args.out, args.out.format == "json" ? io::threshold_json(report)
                                                 : io::threshold_csv(report));
    });
}

// --- classify ------------------------------------------------------------

struct ClassifyArgs {
    double n = 0.0;
    double l_min = 0.01;
    RegimeCutoffs cutoffs;
    OutputOptions out;
};

void setup_classify(CLI::App& app, ClassifyArgs& args) {
    CLI::App* cmd = app.add_subcommand(
        "classify", "Place an (N, l_min) environment into one of the four regimes");
    cmd->add_option("--n", args.n, "Rule count")->required();
    cmd->add_option("--l-min", args.l_min, "Minimum workable latitude")->capture_default_str();
    cmd->add_option("--under-max", args.cutoffs.under_max, "under-regulated upper edge on n/n_min")
        ->capture_default_str();
    cmd->add_option("--tipping-low", args.cutoffs.tipping_low, "tipping band lower edge")
        ->capture_default_str();
    cmd->add_option("--tipping-high", args.cutoffs.tipping_high, "tipping band upper edge")
        ->capture_default_str();
    add_output_options(*cmd, args.out, "text");

    cmd->callback([&args] {
        const RegimeReport report = classify(args.n, args.l_min, args.cutoffs);
        emit(args.out, args.out.format == "json" ? io::regime_json(report)
                                                 : io::regime_text(report));
    });
}

// --- spacing-cdf ---------------------------------------------------------

struct SpacingArgs {
    std::size_t n = 100;
    std::size_t trials = 10000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    OutputOptions out;
};

void setup_spacing(CLI::App& app, SpacingArgs& args) {
    CLI::App* cmd = app.add_subcommand(
        "spacing-cdf", "Empirical latitude CDF against the exponential model");
    cmd->add_option("--n", args.n, "Rule count")->capture_default_str();
    cmd->add_option("--trials", args.trials, "Independent realizations")->capture_default_str();
    cmd->add_option("--seed", args.seed, "Master seed")->capture_default_str();
    cmd->add_option("--threads", args.threads, "Worker threads (0 = auto)")->capture_default_str();
    add_output_options(*cmd, args.out);

    cmd->callback([&args] {
        const SpacingSample sample =
            spacing_distribution(args.n, args.trials, args.seed, args.threads);
        emit(args.out, args.out.format == "json" ? io::spacing_json(sample)
                                                 : io::spacing_csv(sample));
    });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rule-latitude and percolation toolkit"};
    app.require_subcommand(1);

    SweepArgs sweep_args;
    ExactArgs exact_args;
    LatticeArgs lattice_args;
    ClassifyArgs classify_args;
    SpacingArgs spacing_args;

    setup_sweep(app, sweep_args);
    setup_exact(app, exact_args);
    setup_lattice(app, lattice_args);
    setup_classify(app, classify_args);
    setup_spacing(app, spacing_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalidConfig;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
