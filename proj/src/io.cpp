#include "rulelat/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rulelat/analytic.hpp"
#include "rulelat/errors.hpp"

namespace rulelat::io {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::string config_comment(const ConfigDoc& doc) {
    std::string out;
    for (const auto& [key, value] : doc) {
        out += "# " + key + " = " + value + "\n";
    }
    return out;
}

ConfigDoc sweep_config_doc(const SimulationConfig& cfg) {
    // Thread count is deliberately absent: output bytes must not depend on it.
    return {
        {"tool", "sweep"},
        {"trials", std::to_string(cfg.n_trials)},
        {"n_rules_max", std::to_string(cfg.n_rules_max)},
        {"l_min", format_double(cfg.l_min)},
        {"seed", std::to_string(cfg.master_seed)},
        {"incremental", cfg.incremental ? "true" : "false"},
    };
}

// Exponential-law CDF used as the reference model in the spacing artifact.
double exponential_cdf(std::size_t n_rules, double latitude) {
    return occupation_probability(static_cast<double>(n_rules), latitude);
}

json geometry_json(const LatticeGeometry& g) {
    json j{{"kind", to_string(g.kind)}};
    if (g.kind == LatticeKind::Bethe) {
        j["z"] = g.bethe_z;
        j["generations"] = g.generations;
    } else {
        j["side"] = g.side;
    }
    return j;
}

} // namespace

std::string format_double(double v) {
    return json(v).dump();
}

ConfigDoc parse_config(std::istream& in) {
    ConfigDoc doc;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config line " + std::to_string(line_no) +
                                  " is not 'key = value': " + line);
        }
        doc.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return doc;
}

ConfigDoc parse_config_string(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

ConfigDoc parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file: " + path);
    }
    return parse_config(in);
}

std::string serialize_config(const ConfigDoc& doc) {
    std::string out;
    for (const auto& [key, value] : doc) {
        out += key + " = " + value + "\n";
    }
    return out;
}

std::string sweep_csv(const SweepResult& result) {
    std::string out = config_comment(sweep_config_doc(result.config));
    out += "N,l_normal_sim,l_threat_sim,l_threat_exact,l_threat_percolation,ratio\n";
    for (const SweepRow& row : result.rows) {
        const double n = static_cast<double>(row.n_rules);
        out += std::to_string(row.n_rules);
        out += ',' + format_double(row.l_normal_sim);
        out += ',' + format_double(row.l_threat_sim);
        out += ',' + format_double(exact_threat_latitude(n, result.config.l_min));
        out += ',';
        try {
            out += format_double(percolation_threat_latitude(n, result.config.l_min));
        } catch (const DivergenceError&) {
            // leave the field empty once the percolation form saturates
        }
        out += ',' + format_double(row.ratio);
        out += '\n';
    }
    return out;
}

std::string sweep_json(const SweepResult& result) {
    const SimulationConfig& cfg = result.config;
    json j;
    j["config"] = {
        {"tool", "sweep"},
        {"trials", cfg.n_trials},
        {"n_rules_max", cfg.n_rules_max},
        {"l_min", cfg.l_min},
        {"seed", cfg.master_seed},
        {"incremental", cfg.incremental},
    };
    json rows = json::array();
    for (const SweepRow& row : result.rows) {
        const double n = static_cast<double>(row.n_rules);
        json r{
            {"n", row.n_rules},
            {"l_normal_sim", row.l_normal_sim},
            {"l_threat_sim", row.l_threat_sim},
            {"l_threat_exact", exact_threat_latitude(n, cfg.l_min)},
            {"ratio", row.ratio},
        };
        try {
            r["l_threat_percolation"] = percolation_threat_latitude(n, cfg.l_min);
        } catch (const DivergenceError&) {
            r["l_threat_percolation"] = nullptr;
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

std::string spacing_csv(const SpacingSample& sample) {
    const double ks = sample.ks_distance(
        [&](double x) { return exponential_cdf(sample.n_rules, x); });
    std::string out = config_comment({
        {"tool", "spacing-cdf"},
        {"n_rules", std::to_string(sample.n_rules)},
        {"trials", std::to_string(sample.n_trials)},
        {"seed", std::to_string(sample.seed)},
        {"ks_exponential", format_double(ks)},
    });
    out += "latitude,cdf_empirical,cdf_exponential\n";
    for (const double x : sample.grid) {
        out += format_double(x);
        out += ',' + format_double(sample.empirical_cdf(x));
        out += ',' + format_double(exponential_cdf(sample.n_rules, x));
        out += '\n';
    }
    return out;
}

std::string spacing_json(const SpacingSample& sample) {
    const double ks = sample.ks_distance(
        [&](double x) { return exponential_cdf(sample.n_rules, x); });
    json j;
    j["config"] = {
        {"tool", "spacing-cdf"},
        {"n_rules", sample.n_rules},
        {"trials", sample.n_trials},
        {"seed", sample.seed},
    };
    j["ks_exponential"] = ks;
    json rows = json::array();
    for (const double x : sample.grid) {
        rows.push_back({
            {"latitude", x},
            {"cdf_empirical", sample.empirical_cdf(x)},
            {"cdf_exponential", exponential_cdf(sample.n_rules, x)},
        });
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

std::string threshold_csv(const ThresholdReport& report) {
    const LatticeGeometry& g = report.geometry;
    ConfigDoc doc{{"tool", "lattice-threshold"}, {"geometry", to_string(g.kind)}};
    if (g.kind == LatticeKind::Bethe) {
        doc.emplace_back("z", std::to_string(g.bethe_z));
    } else {
        doc.emplace_back("side", std::to_string(g.side));
    }
    doc.emplace_back("seed", std::to_string(report.seed));
    std::string out = config_comment(doc);
    out += "geometry,coordination,p_c_reference,p_c_estimate,half_width,sites,trials_per_step\n";
    out += std::string(to_string(g.kind));
    out += ',' + std::to_string(g.coordination());
    out += ',' + format_double(report.reference_p_c);
    out += ',' + format_double(report.estimate.p_c);
    out += ',' + format_double(report.estimate.half_width);
    out += ',' + std::to_string(report.estimate.sites);
    out += ',' + std::to_string(report.estimate.trials_per_step);
    out += '\n';
    return out;
}

std::string threshold_json(const ThresholdReport& report) {
    json j;
    j["config"] = {
        {"tool", "lattice-threshold"},
        {"geometry", geometry_json(report.geometry)},
        {"seed", report.seed},
    };
    j["coordination"] = report.geometry.coordination();
    j["p_c_reference"] = report.reference_p_c;
    j["p_c_estimate"] = report.estimate.p_c;
    j["half_width"] = report.estimate.half_width;
    j["analytic"] = report.estimate.analytic;
    j["sites"] = report.estimate.sites;
    j["trials_per_step"] = report.estimate.trials_per_step;
    j["steps"] = report.estimate.steps;
    return j.dump(2) + "\n";
}

std::string regime_text(const RegimeReport& report) {
    ConfigDoc doc{
        {"regime", to_string(report.regime)},
        {"n_rules", format_double(report.n_rules)},
        {"l_min", format_double(report.l_min)},
        {"n_min", format_double(report.n_min_value)},
        {"l_normal", format_double(report.l_normal)},
        {"l_threat_exact", format_double(report.l_threat_exact)},
        {"ratio", format_double(report.ratio)},
        {"distance_to_tipping", format_double(report.distance_to_tipping)},
    };
    return serialize_config(doc);
}

std::string regime_json(const RegimeReport& report) {
    const json j{
        {"regime", to_string(report.regime)},
        {"n_rules", report.n_rules},
        {"l_min", report.l_min},
        {"n_min", report.n_min_value},
        {"l_normal", report.l_normal},
        {"l_threat_exact", report.l_threat_exact},
        {"ratio", report.ratio},
        {"distance_to_tipping", report.distance_to_tipping},
    };
    return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

} // namespace rulelat::io
