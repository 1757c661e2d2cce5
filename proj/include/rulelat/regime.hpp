#pragma once

namespace rulelat {

enum class Regime {
    UnderRegulated,
    PossiblyOptimal,
    TippingPoint,
    OverRegulated,
};

const char* to_string(Regime r) noexcept;

// Band edges on n/n_min separating the regimes. The defaults reproduce the
// visual bands of the latitude-vs-rules curves; all are tunable.
struct RegimeCutoffs {
    double under_max = 0.1;
    double tipping_low = 0.8;
    double tipping_high = 1.2;

    void validate() const;
};

struct RegimeReport {
    Regime regime;
    double n_rules;
    double l_min;
    double n_min_value;           // 1 / l_min
    double l_normal;              // 1 / (n + 1)
    double l_threat_exact;
    double ratio;                 // l_threat_exact / l_normal, >= 1
    double distance_to_tipping;   // n / n_min
};

RegimeReport classify(double n_rules, double l_min, const RegimeCutoffs& cutoffs = {});

} // namespace rulelat
