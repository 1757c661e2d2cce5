#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rulelat {

// Smallest latitude a normal individual needs; strictly inside (0,1).
class MinLatitude {
public:
    explicit MinLatitude(double value);
    double value() const noexcept { return value_; }

private:
    double value_;
};

// Interior rule boundaries on (0,1), strictly increasing and duplicate-free.
// Hard walls at 0 and 1 are implicit and never stored.
class BoundarySet {
public:
    BoundarySet() = default;
    explicit BoundarySet(std::vector<double> interior);

    // Trusts the caller to pass a valid sorted interior; used on values that
    // are already subsets of a validated set.
    static BoundarySet from_sorted_unchecked(std::vector<double> interior);

    const std::vector<double>& interior() const noexcept { return interior_; }
    std::size_t rule_count() const noexcept { return interior_.size(); }

    bool operator==(const BoundarySet&) const = default;

private:
    std::vector<double> interior_;
};

// Gap widths between consecutive boundaries, walls included. Count is
// rule_count() + 1 and the widths sum to 1 (tolerance 1e-12).
class LatitudeProfile {
public:
    explicit LatitudeProfile(std::vector<double> gaps);

    const std::vector<double>& gaps() const noexcept { return gaps_; }
    std::size_t size() const noexcept { return gaps_.size(); }
    double mean() const noexcept;

private:
    std::vector<double> gaps_;
};

// [b1 - 0, b2 - b1, ..., 1 - bN].
LatitudeProfile latitudes_from_boundaries(const BoundarySet& b);

double mean_latitude(const LatitudeProfile& p);

// Drops every boundary whose gap on its left is <= lmin, in a single pass
// over the original gaps: a gap merged by a removal is not re-checked.
// Equivalently, keeps the right endpoint of every gap strictly wider than
// lmin. Idempotent: surviving boundaries keep gaps > lmin on their left.
BoundarySet eliminate_crossable_boundaries(const BoundarySet& b, MinLatitude lmin);

// latitudes_from_boundaries(eliminate_crossable_boundaries(b, lmin)); the
// mean equals 1/(surviving boundary count + 1).
LatitudeProfile threat_latitudes(const BoundarySet& b, MinLatitude lmin);

namespace detail {

// One pass over a sorted duplicate-free interior span in (0,1). Single
// implementation behind the ops above and the Monte Carlo sweep.
struct GapScan {
    double normal_mean = 0.0;     // mean of all gaps
    double threat_mean = 0.0;     // mean of gaps after elimination
    std::size_t surviving = 0;    // interior boundaries kept
};

GapScan scan_gaps(std::span<const double> interior, double lmin) noexcept;

std::vector<double> surviving_boundaries(std::span<const double> interior, double lmin);

} // namespace detail

} // namespace rulelat
