#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rulelat/errors.hpp"
#include "rulelat/io.hpp"
#include "rulelat/lattice.hpp"
#include "rulelat/montecarlo.hpp"
#include "rulelat/regime.hpp"

using namespace rulelat;
using nlohmann::json;

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        lines.push_back(line);
    }
    return lines;
}

} // namespace

TEST_SUITE("io") {

TEST_CASE("format_double round-trips") {
    for (const double v : {0.01, 1.0 / 3.0, 1e-12, 0.593, 123456.789, 1e300, 0.0}) {
        CHECK(std::stod(io::format_double(v)) == v);
    }
    CHECK(io::format_double(0.01) == "0.01");
}

TEST_CASE("config document round-trips") {
    const io::ConfigDoc doc{
        {"tool", "sweep"}, {"trials", "100"}, {"l_min", "0.01"}, {"seed", "42"}};
    const std::string text = io::serialize_config(doc);
    CHECK(io::parse_config_string(text) == doc);

    const auto parsed = io::parse_config_string(
        "# comment line\n\n  trials =  7 \nl_min=0.5   # trailing note\n");
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0] == std::pair<std::string, std::string>{"trials", "7"});
    CHECK(parsed[1] == std::pair<std::string, std::string>{"l_min", "0.5"});

    CHECK_THROWS_AS(io::parse_config_string("not a key value line\n"), ValidationError);
    CHECK_THROWS_AS(io::parse_config_file("/no/such/config.cfg"), IoError);
}

TEST_CASE("sweep CSV schema") {
    SimulationConfig cfg;
    cfg.n_trials = 3;
    cfg.n_rules_max = 5;
    cfg.master_seed = 9;
    const SweepResult result = run_sweep(cfg, 1);
    const std::string csv = io::sweep_csv(result);
    const auto lines = split_lines(csv);

    REQUIRE(lines.size() == 6 + 1 + cfg.n_rules_max);   // config echo + header + rows
    CHECK(lines[0] == "# tool = sweep");
    CHECK(lines[4] == "# seed = 9");
    CHECK(lines[6] == "N,l_normal_sim,l_threat_sim,l_threat_exact,l_threat_percolation,ratio");

    // The '#' block strips to a loadable config document.
    std::string comment_block;
    for (std::size_t i = 0; i < 6; ++i) {
        comment_block += lines[i] + "\n";
    }
    CHECK(io::parse_config_string(comment_block).empty());   // comments only
    std::string stripped;
    for (std::size_t i = 0; i < 6; ++i) {
        stripped += lines[i].substr(2) + "\n";
    }
    const auto doc = io::parse_config_string(stripped);
    REQUIRE(doc.size() == 6);
    CHECK(doc[1] == std::pair<std::string, std::string>{"trials", "3"});

    // First data row: N = 1, normal mean is exactly 1/2.
    CHECK(lines[7].substr(0, 6) == "1,0.5,");

    // Emission is deterministic.
    CHECK(io::sweep_csv(result) == csv);
}

TEST_CASE("sweep CSV leaves the percolation column empty past saturation") {
    SweepResult result;
    result.config.n_trials = 1;
    result.config.n_rules_max = 1;
    result.config.l_min = 0.9;
    result.rows.push_back({10000, 1e-4, 1e-4, 1.0});
    const std::string csv = io::sweep_csv(result);
    const auto lines = split_lines(csv);
    CHECK(lines.back().find(",,") != std::string::npos);

    const json j = json::parse(io::sweep_json(result));
    CHECK(j["rows"][0]["l_threat_percolation"].is_null());
}

TEST_CASE("sweep JSON mirrors the CSV fields") {
    SimulationConfig cfg;
    cfg.n_trials = 2;
    cfg.n_rules_max = 4;
    cfg.master_seed = 5;
    const SweepResult result = run_sweep(cfg, 1);
    const json j = json::parse(io::sweep_json(result));

    CHECK(j["config"]["trials"] == 2);
    CHECK(j["config"]["n_rules_max"] == 4);
    CHECK(j["config"]["seed"] == 5);
    CHECK(j["config"]["incremental"] == true);
    CHECK(j["config"].contains("l_min"));
    CHECK_FALSE(j["config"].contains("threads"));

    REQUIRE(j["rows"].size() == 4);
    const auto& row = j["rows"][0];
    for (const char* key : {"n", "l_normal_sim", "l_threat_sim", "l_threat_exact",
                            "l_threat_percolation", "ratio"}) {
        CHECK(row.contains(key));
    }
    CHECK(row["n"] == 1);
    CHECK(row["l_normal_sim"].get<double>() == result.rows[0].l_normal_sim);
}

TEST_CASE("spacing artifacts") {
    const SpacingSample sample = spacing_distribution(5, 200, 3);
    const std::string csv = io::spacing_csv(sample);
    const auto lines = split_lines(csv);
    CHECK(lines[0] == "# tool = spacing-cdf");
    CHECK(lines[5] == "latitude,cdf_empirical,cdf_exponential");
    CHECK(lines.size() == 6 + sample.grid.size());

    bool saw_ks = false;
    for (const auto& line : lines) {
        saw_ks = saw_ks || line.rfind("# ks_exponential = ", 0) == 0;
    }
    CHECK(saw_ks);

    const json j = json::parse(io::spacing_json(sample));
    CHECK(j["config"]["n_rules"] == 5);
    CHECK(j["config"]["trials"] == 200);
    CHECK(j["ks_exponential"].is_number());
    REQUIRE(j["rows"].size() == sample.grid.size());
    double last = -1.0;
    for (const auto& row : j["rows"]) {
        const double cdf = row["cdf_empirical"].get<double>();
        CHECK(cdf >= last);
        last = cdf;
    }
}

TEST_CASE("threshold artifacts") {
    io::ThresholdReport report;
    report.geometry = LatticeGeometry::bethe(4, 3);
    report.estimate = estimate_threshold(report.geometry, 10, 1);
    report.reference_p_c = reference_threshold(report.geometry);
    report.seed = 1;

    const std::string csv = io::threshold_csv(report);
    const auto lines = split_lines(csv);
    CHECK(lines[0] == "# tool = lattice-threshold");
    CHECK(lines[4] ==
          "geometry,coordination,p_c_reference,p_c_estimate,half_width,sites,trials_per_step");
    CHECK(lines[5].rfind("bethe,4,", 0) == 0);

    const json j = json::parse(io::threshold_json(report));
    CHECK(j["p_c_estimate"].get<double>() == 1.0 / 3.0);
    CHECK(j["p_c_reference"].get<double>() == 1.0 / 3.0);
    CHECK(j["analytic"] == true);
    CHECK(j["config"]["geometry"]["kind"] == "bethe");
}

TEST_CASE("regime artifacts") {
    const RegimeReport report = classify(100, 0.01);
    const std::string text = io::regime_text(report);
    CHECK(text.find("regime = tipping-point") != std::string::npos);
    CHECK(io::parse_config_string(text).size() == 8);

    const json j = json::parse(io::regime_json(report));
    CHECK(j["regime"] == "tipping-point");
    CHECK(j["n_min"].get<double>() == doctest::Approx(100.0));
    CHECK(j["distance_to_tipping"].get<double>() == doctest::Approx(1.0));
    CHECK(j["ratio"].get<double>() == doctest::Approx(2.699).epsilon(1e-3));
}

TEST_CASE("file writing") {
    const auto path =
        (std::filesystem::temp_directory_path() / "rulelat_io_test.csv").string();
    io::write_file(path, "a,b\n1,2\n");
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    CHECK(buffer.str() == "a,b\n1,2\n");
    std::remove(path.c_str());

    CHECK_THROWS_AS(io::write_file("/no/such/dir/file.csv", "x"), IoError);
}

} // TEST_SUITE
