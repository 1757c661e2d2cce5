#include "rulelat/regime.hpp"

#include <string>

#include "rulelat/analytic.hpp"
#include "rulelat/errors.hpp"

namespace rulelat {

const char* to_string(Regime r) noexcept {
    switch (r) {
        case Regime::UnderRegulated: return "under-regulated";
        case Regime::PossiblyOptimal: return "possibly-optimal";
        case Regime::TippingPoint: return "tipping-point";
        case Regime::OverRegulated: return "over-regulated";
    }
    return "unknown";
}

void RegimeCutoffs::validate() const {
    if (!(under_max > 0.0 && under_max <= tipping_low && tipping_low <= tipping_high)) {
        throw ValidationError("regime cutoffs must satisfy 0 < under_max <= tipping_low <= tipping_high");
    }
}

RegimeReport classify(double n_rules, double l_min, const RegimeCutoffs& cutoffs) {
    if (!(n_rules >= 0.0)) {
        throw ValidationError("rule count must be >= 0, got " + std::to_string(n_rules));
    }
    if (!(l_min > 0.0 && l_min < 1.0)) {
        throw ValidationError("minimum latitude must lie in (0,1), got " + std::to_string(l_min));
    }
    cutoffs.validate();

    const double nm = n_min(l_min);
    const double r = n_rules / nm;

    Regime regime;
    if (r < cutoffs.under_max) {
        regime = Regime::UnderRegulated;
    } else if (r < cutoffs.tipping_low) {
        regime = Regime::PossiblyOptimal;
    } else if (r <= cutoffs.tipping_high) {
        regime = Regime::TippingPoint;
    } else {
        regime = Regime::OverRegulated;
    }

    const double l_normal = 1.0 / (n_rules + 1.0);
    const double l_threat = exact_threat_latitude(n_rules, l_min);
    return RegimeReport{
        .regime = regime,
        .n_rules = n_rules,
        .l_min = l_min,
        .n_min_value = nm,
        .l_normal = l_normal,
        .l_threat_exact = l_threat,
        .ratio = l_threat / l_normal,
        .distance_to_tipping = r,
    };
}

} // namespace rulelat
