#include "rulelat/spacing.hpp"

#include <cassert>
#include <cmath>
#include <numeric>
#include <string>

#include "rulelat/errors.hpp"

namespace rulelat {

namespace {
constexpr double kSumTolerance = 1e-12;
}

MinLatitude::MinLatitude(double value) : value_(value) {
    if (!(value > 0.0 && value < 1.0)) {
        throw ValidationError("minimum latitude must lie in (0,1), got " +
                              std::to_string(value));
    }
}

BoundarySet::BoundarySet(std::vector<double> interior) : interior_(std::move(interior)) {
    for (std::size_t i = 0; i < interior_.size(); ++i) {
        const double x = interior_[i];
        if (!(x > 0.0 && x < 1.0)) {
            throw ValidationError("boundary " + std::to_string(i) +
                                  " outside (0,1): " + std::to_string(x));
        }
        if (i > 0 && !(x > interior_[i - 1])) {
            throw ValidationError("boundaries not strictly increasing at index " +
                                  std::to_string(i));
        }
    }
}

BoundarySet BoundarySet::from_sorted_unchecked(std::vector<double> interior) {
    BoundarySet b;
    b.interior_ = std::move(interior);
#ifndef NDEBUG
    for (std::size_t i = 0; i < b.interior_.size(); ++i) {
        assert(b.interior_[i] > 0.0 && b.interior_[i] < 1.0);
        assert(i == 0 || b.interior_[i] > b.interior_[i - 1]);
    }
#endif
    return b;
}

LatitudeProfile::LatitudeProfile(std::vector<double> gaps) : gaps_(std::move(gaps)) {
    if (gaps_.empty()) {
        throw ValidationError("latitude profile needs at least one gap");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < gaps_.size(); ++i) {
        if (!(gaps_[i] > 0.0)) {
            throw ValidationError("gap " + std::to_string(i) +
                                  " not positive: " + std::to_string(gaps_[i]));
        }
        sum += gaps_[i];
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw ValidationError("gaps sum to " + std::to_string(sum) + ", expected 1");
    }
}

double LatitudeProfile::mean() const noexcept {
    const double sum = std::accumulate(gaps_.begin(), gaps_.end(), 0.0);
    return sum / static_cast<double>(gaps_.size());
}

LatitudeProfile latitudes_from_boundaries(const BoundarySet& b) {
    const auto& xs = b.interior();
    std::vector<double> gaps;
    gaps.reserve(xs.size() + 1);
    double prev = 0.0;
    for (double x : xs) {
        gaps.push_back(x - prev);
        prev = x;
    }
    gaps.push_back(1.0 - prev);
    return LatitudeProfile(std::move(gaps));
}

double mean_latitude(const LatitudeProfile& p) {
    return p.mean();
}

namespace detail {

GapScan scan_gaps(std::span<const double> interior, double lmin) noexcept {
    double prev = 0.0;
    double normal_sum = 0.0;
    double threat_prev = 0.0;
    double threat_sum = 0.0;
    std::size_t kept = 0;
    for (double x : interior) {
        normal_sum += x - prev;
        if (x - prev > lmin) {
            threat_sum += x - threat_prev;
            threat_prev = x;
            ++kept;
        }
        prev = x;
    }
    normal_sum += 1.0 - prev;
    threat_sum += 1.0 - threat_prev;
    return {normal_sum / static_cast<double>(interior.size() + 1),
            threat_sum / static_cast<double>(kept + 1), kept};
}

std::vector<double> surviving_boundaries(std::span<const double> interior, double lmin) {
    std::vector<double> kept;
    kept.reserve(interior.size());
    double prev = 0.0;
    for (double x : interior) {
        if (x - prev > lmin) {
            kept.push_back(x);
        }
        prev = x;
    }
    return kept;
}

} // namespace detail

BoundarySet eliminate_crossable_boundaries(const BoundarySet& b, MinLatitude lmin) {
    return BoundarySet::from_sorted_unchecked(
        detail::surviving_boundaries(b.interior(), lmin.value()));
}

LatitudeProfile threat_latitudes(const BoundarySet& b, MinLatitude lmin) {
    return latitudes_from_boundaries(eliminate_crossable_boundaries(b, lmin));
}

} // namespace rulelat
