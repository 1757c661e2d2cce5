#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rulelat {

enum class LatticeKind {
    Linear1D,
    Ring1D,
    Honeycomb2D,
    Square2D,
    Triangular2D,
    Diamond3D,       // reference threshold only, no adjacency builder
    SimpleCubic3D,
    Bcc3D,           // reference threshold only
    Fcc3D,           // reference threshold only
    Hypercubic4D,
    Hypercubic5D,
    Hypercubic6D,
    Hypercubic7D,
    Bethe,
};

const char* to_string(LatticeKind k) noexcept;
LatticeKind lattice_kind_from_string(const std::string& name);

struct LatticeGeometry {
    LatticeKind kind = LatticeKind::Square2D;
    std::size_t side = 0;          // sites per axis (regular lattices)
    std::size_t generations = 0;   // shells around the Bethe root
    unsigned bethe_z = 3;          // Bethe coordination

    static LatticeGeometry linear(std::size_t length);
    static LatticeGeometry ring(std::size_t length);
    static LatticeGeometry honeycomb(std::size_t side);
    static LatticeGeometry square(std::size_t side);
    static LatticeGeometry triangular(std::size_t side);
    static LatticeGeometry simple_cubic(std::size_t side);
    static LatticeGeometry hypercubic(unsigned dimension, std::size_t side);
    static LatticeGeometry bethe(unsigned z, std::size_t generations);

    unsigned dimension() const;      // 0 for Bethe
    unsigned coordination() const;   // interior-site neighbor count
    void validate() const;
};

// Site adjacency in compressed form, plus the two opposite faces (along the
// first axis, open boundaries) used for spanning tests. Face lists are empty
// for geometries without faces (ring, Bethe).
class Lattice {
public:
    Lattice(LatticeGeometry geometry, std::size_t site_count,
            std::vector<std::int32_t> offsets, std::vector<std::int32_t> neighbors,
            std::vector<std::int32_t> low_face, std::vector<std::int32_t> high_face);

    const LatticeGeometry& geometry() const noexcept { return geometry_; }
    std::size_t site_count() const noexcept { return site_count_; }

    std::span<const std::int32_t> neighbors(std::size_t site) const noexcept {
        return {neighbors_.data() + offsets_[site],
                neighbors_.data() + offsets_[site + 1]};
    }

    std::span<const std::int32_t> low_face() const noexcept { return low_face_; }
    std::span<const std::int32_t> high_face() const noexcept { return high_face_; }
    bool has_spanning_faces() const noexcept {
        return !low_face_.empty() && !high_face_.empty();
    }

private:
    LatticeGeometry geometry_;
    std::size_t site_count_;
    std::vector<std::int32_t> offsets_;     // site_count + 1 entries
    std::vector<std::int32_t> neighbors_;
    std::vector<std::int32_t> low_face_;
    std::vector<std::int32_t> high_face_;
};

// Throws UnsupportedGeometryError for kinds without an adjacency builder
// (diamond, bcc, fcc).
Lattice build_lattice(const LatticeGeometry& g);

struct Occupancy {
    double p = 0.0;
    std::uint64_t seed = 0;
    std::size_t occupied_count = 0;
    std::vector<std::uint8_t> occupied;
};

// Independent per-site occupation with probability p, deterministic in seed.
Occupancy occupy(const Lattice& lattice, double p, std::uint64_t seed);

struct ClusterStats {
    std::vector<std::size_t> sizes;            // one entry per occupied cluster
    bool spanning = false;                     // some cluster touches both faces
    std::optional<double> size_weighted_mean;  // sum s^2 / sum s; absent if empty
};

ClusterStats label_clusters(const Lattice& lattice, const Occupancy& occ);

// Trial average of the size-weighted mean cluster size. Trials with no
// occupied site are skipped; if every trial is empty the p -> 0 limit 1 is
// returned.
double empirical_mean_cluster_size(const LatticeGeometry& g, double p,
                                   std::size_t trials, std::uint64_t seed,
                                   unsigned threads = 0);
double empirical_mean_cluster_size(const Lattice& lattice, double p,
                                   std::size_t trials, std::uint64_t seed,
                                   unsigned threads = 0);

// Fraction of trials containing a spanning cluster. Requires faces.
double spanning_probability(const LatticeGeometry& g, double p,
                            std::size_t trials, std::uint64_t seed,
                            unsigned threads = 0);
double spanning_probability(const Lattice& lattice, double p,
                            std::size_t trials, std::uint64_t seed,
                            unsigned threads = 0);

struct ThresholdEstimate {
    double p_c = 0.0;
    double half_width = 0.0;        // final bisection half-interval (0 if analytic)
    bool analytic = false;          // Bethe closed form 1/(z-1)
    std::size_t sites = 0;
    std::size_t trials_per_step = 0;
    std::size_t steps = 0;
};

// Bisection on spanning_probability to the p where it crosses 1/2. Bethe
// lattices return the analytic threshold without simulation. Throws
// ConvergenceError if max_steps halvings cannot reach `tolerance`.
ThresholdEstimate estimate_threshold(const LatticeGeometry& g,
                                     std::size_t trials_per_step, std::uint64_t seed,
                                     std::size_t max_steps = 16, double tolerance = 2.5e-4,
                                     unsigned threads = 0);

// Published site-percolation thresholds for commonly studied lattices.
struct ThresholdReference {
    const char* dimension;
    const char* lattice;
    unsigned coordination;
    double p_c;
};
std::span<const ThresholdReference> reference_thresholds() noexcept;

// Reference value for a concrete geometry; Bethe uses 1/(z-1).
double reference_threshold(const LatticeGeometry& g);

} // namespace rulelat
