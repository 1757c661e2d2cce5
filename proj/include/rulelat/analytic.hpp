#pragma once

namespace rulelat {

// Probability that a latitude falls below `latitude` with n_rules rules in
// place, under the exponential spacing law: 1 - exp(-(n+1) L).
double occupation_probability(double n_rules, double latitude);

// Closed-form threat latitude 1 / (n exp(-(n+1) l_min) + 1). Equals 1 at
// n = 0 and 1/(n+1) at l_min = 0.
double exact_threat_latitude(double n_rules, double l_min);

// Expected surviving boundary count (1 - P(n, l_min)) n, kept real-valued.
double threat_boundary_count_expected(double n_rules, double l_min);

// Rule count minimizing the threat latitude: 1 / l_min.
double n_min(double l_min);
long long n_min_nearest(double l_min);

struct MinimumThreatLatitude {
    double exact;    // closed form evaluated at the minimizing rule count
    double approx;   // small-l_min asymptote e * l_min
};
MinimumThreatLatitude min_threat_latitude(double l_min);

// Size-weighted mean cluster size (p_c + p) / (p_c - p) for one-dimensional
// site percolation. Throws DivergenceError at or above p_c.
double mean_cluster_size_1d(double p, double p_c = 1.0);

// Threat latitude in the infinite-lattice percolation picture:
// S(P(n, l_min)) / (n + 1). Throws DivergenceError once the site survival
// probability underflows to zero.
double percolation_threat_latitude(double n_rules, double l_min);

} // namespace rulelat
