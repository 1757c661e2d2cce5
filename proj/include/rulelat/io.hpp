#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rulelat/lattice.hpp"
#include "rulelat/montecarlo.hpp"
#include "rulelat/regime.hpp"

namespace rulelat::io {

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

// Flat "key = value" document: ordered, '#' comments and blank lines
// ignored, values kept verbatim. This is both the config-file syntax and
// the header-comment syntax embedded in every CSV artifact.
using ConfigDoc = std::vector<std::pair<std::string, std::string>>;

ConfigDoc parse_config(std::istream& in);
ConfigDoc parse_config_string(const std::string& text);
ConfigDoc parse_config_file(const std::string& path);
std::string serialize_config(const ConfigDoc& doc);

// Sweep artifact. CSV columns:
//   N,l_normal_sim,l_threat_sim,l_threat_exact,l_threat_percolation,ratio
// The percolation column is left empty on rows where the percolation form
// diverges. A config echo (seed included, thread count excluded) prefixes
// the CSV as '#' comments and is embedded in the JSON document.
std::string sweep_csv(const SweepResult& result);
std::string sweep_json(const SweepResult& result);

// Spacing CDF table over the sample grid. CSV columns:
//   latitude,cdf_empirical,cdf_exponential
std::string spacing_csv(const SpacingSample& sample);
std::string spacing_json(const SpacingSample& sample);

struct ThresholdReport {
    LatticeGeometry geometry;
    ThresholdEstimate estimate;
    double reference_p_c = 0.0;
    std::uint64_t seed = 0;
};

// CSV columns:
//   geometry,coordination,p_c_reference,p_c_estimate,half_width,sites,trials_per_step
std::string threshold_csv(const ThresholdReport& report);
std::string threshold_json(const ThresholdReport& report);

std::string regime_text(const RegimeReport& report);
std::string regime_json(const RegimeReport& report);

// Whole-file write; throws IoError on failure.
void write_file(const std::string& path, const std::string& contents);

} // namespace rulelat::io
