#include "rulelat/analytic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rulelat/errors.hpp"

namespace rulelat {

namespace {

void require_rule_count(double n) {
    if (!(n >= 0.0)) {
        throw ValidationError("rule count must be >= 0, got " + std::to_string(n));
    }
}

void require_min_latitude(double l, bool allow_zero) {
    const bool ok = allow_zero ? (l >= 0.0 && l < 1.0) : (l > 0.0 && l < 1.0);
    if (!ok) {
        throw ValidationError("minimum latitude out of range: " + std::to_string(l));
    }
}

// exp(-(n+1) l): the probability that a given latitude survives.
double survival(double n, double l) {
    return std::exp(-(n + 1.0) * l);
}

} // namespace

double occupation_probability(double n_rules, double latitude) {
    require_rule_count(n_rules);
    if (!(latitude >= 0.0 && latitude <= 1.0)) {
        throw ValidationError("latitude must lie in [0,1], got " + std::to_string(latitude));
    }
    return -std::expm1(-(n_rules + 1.0) * latitude);
}

double exact_threat_latitude(double n_rules, double l_min) {
    require_rule_count(n_rules);
    require_min_latitude(l_min, /*allow_zero=*/true);
    return 1.0 / (n_rules * survival(n_rules, l_min) + 1.0);
}

double threat_boundary_count_expected(double n_rules, double l_min) {
    require_rule_count(n_rules);
    require_min_latitude(l_min, /*allow_zero=*/true);
    return n_rules * survival(n_rules, l_min);
}

double n_min(double l_min) {
    require_min_latitude(l_min, /*allow_zero=*/false);
    return 1.0 / l_min;
}

long long n_min_nearest(double l_min) {
    return std::llround(n_min(l_min));
}

MinimumThreatLatitude min_threat_latitude(double l_min) {
    const double n = n_min(l_min);
    // Closed form at n = 1/l_min: the exponent collapses to -(l_min + 1).
    const double exact = 1.0 / (n * std::exp(-(l_min + 1.0)) + 1.0);
    return {exact, std::numbers::e * l_min};
}

double mean_cluster_size_1d(double p, double p_c) {
    if (!(p_c > 0.0 && p_c <= 1.0)) {
        throw ValidationError("percolation threshold must lie in (0,1], got " +
                              std::to_string(p_c));
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError("occupation probability must lie in [0,1], got " +
                              std::to_string(p));
    }
    if (p >= p_c) {
        throw DivergenceError("mean cluster size diverges at the percolation threshold (p = " +
                              std::to_string(p) + ", p_c = " + std::to_string(p_c) + ")");
    }
    return (p_c + p) / (p_c - p);
}

double percolation_threat_latitude(double n_rules, double l_min) {
    require_rule_count(n_rules);
    require_min_latitude(l_min, /*allow_zero=*/true);
    // Work with the survival probability q = 1 - P directly so the result
    // stays finite until q underflows (exponent below about -745).
    const double q = survival(n_rules, l_min);
    if (q <= 0.0) {
        throw DivergenceError("occupation probability saturated at 1 for n = " +
                              std::to_string(n_rules) + ", l_min = " + std::to_string(l_min));
    }
    const double cluster_size = (2.0 - q) / q;   // (p_c + P)/(p_c - P) with p_c = 1
    return cluster_size / (n_rules + 1.0);
}

} // namespace rulelat
