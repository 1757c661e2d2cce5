#include "rulelat/lattice.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "rulelat/errors.hpp"
#include "rulelat/rng.hpp"
#include "parallel.hpp"

namespace rulelat {

namespace {

constexpr std::size_t kMaxSites = 100'000'000;

// Offsets are int32; refuse lattices whose directed edge count could wrap.
void check_edge_capacity(std::size_t sites, std::size_t max_degree) {
    constexpr std::size_t kMaxEdges = std::numeric_limits<std::int32_t>::max();
    if (sites > kMaxEdges / std::max<std::size_t>(1, max_degree)) {
        throw ValidationError("lattice too large");
    }
}

struct UnionFind {
    std::vector<std::int32_t> parent;
    std::vector<std::int32_t> size;

    void reset(std::size_t n) {
        parent.resize(n);
        size.assign(n, 1);
        std::iota(parent.begin(), parent.end(), 0);
    }

    std::int32_t find(std::int32_t x) noexcept {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];   // path halving
            x = parent[x];
        }
        return x;
    }

    void unite(std::int32_t a, std::int32_t b) noexcept {
        a = find(a);
        b = find(b);
        if (a == b) {
            return;
        }
        if (size[a] < size[b]) {
            std::swap(a, b);
        }
        parent[b] = a;
        size[a] += size[b];
    }
};

void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError("occupation probability must lie in [0,1], got " +
                              std::to_string(p));
    }
}

std::size_t checked_power(std::size_t base, unsigned exp) {
    std::size_t n = 1;
    for (unsigned i = 0; i < exp; ++i) {
        if (base != 0 && n > kMaxSites / base) {
            throw ValidationError("lattice too large");
        }
        n *= base;
    }
    return n;
}

std::size_t bethe_site_count(unsigned z, std::size_t generations) {
    std::size_t total = 1;
    std::size_t shell = z;
    for (std::size_t g = 1; g <= generations; ++g) {
        if (total > kMaxSites - shell) {
            throw ValidationError("Bethe lattice too large");
        }
        total += shell;
        if (shell > kMaxSites / std::max(1u, z - 1)) {
            throw ValidationError("Bethe lattice too large");
        }
        shell *= z - 1;
    }
    return total;
}

Lattice make_lattice(const LatticeGeometry& g, std::size_t n,
                     std::vector<std::vector<std::int32_t>> adjacency,
                     std::vector<std::int32_t> low, std::vector<std::int32_t> high) {
    std::vector<std::int32_t> offsets(n + 1, 0);
    std::size_t total = 0;
    for (std::size_t s = 0; s < n; ++s) {
        total += adjacency[s].size();
        offsets[s + 1] = static_cast<std::int32_t>(total);
    }
    std::vector<std::int32_t> neighbors;
    neighbors.reserve(total);
    for (std::size_t s = 0; s < n; ++s) {
        neighbors.insert(neighbors.end(), adjacency[s].begin(), adjacency[s].end());
    }
    return Lattice(g, n, std::move(offsets), std::move(neighbors), std::move(low), std::move(high));
}

Lattice build_chain(const LatticeGeometry& g, bool wrap) {
    const std::size_t n = g.side;
    std::vector<std::int32_t> offsets(n + 1, 0);
    std::vector<std::int32_t> neighbors;
    neighbors.reserve(2 * n);
    for (std::size_t s = 0; s < n; ++s) {
        if (s > 0) {
            neighbors.push_back(static_cast<std::int32_t>(s - 1));
        } else if (wrap && n > 2) {
            neighbors.push_back(static_cast<std::int32_t>(n - 1));
        }
        if (s + 1 < n) {
            neighbors.push_back(static_cast<std::int32_t>(s + 1));
        } else if (wrap && n > 2) {
            neighbors.push_back(0);
        }
        offsets[s + 1] = static_cast<std::int32_t>(neighbors.size());
    }
    std::vector<std::int32_t> low;
    std::vector<std::int32_t> high;
    if (!wrap) {
        low.push_back(0);
        high.push_back(static_cast<std::int32_t>(n - 1));
    }
    return Lattice(g, n, std::move(offsets), std::move(neighbors), std::move(low), std::move(high));
}

// Hypercubic lattice of any dimension, open boundaries, spanning faces
// along axis 0.
Lattice build_hypercubic(const LatticeGeometry& g, unsigned dim) {
    const std::size_t side = g.side;
    const std::size_t n = checked_power(side, dim);
    check_edge_capacity(n, 2 * dim);
    std::vector<std::size_t> stride(dim);
    stride[dim - 1] = 1;
    for (unsigned a = dim - 1; a > 0; --a) {
        stride[a - 1] = stride[a] * side;
    }

    std::vector<std::int32_t> offsets(n + 1, 0);
    std::vector<unsigned> coord(dim);
    const auto decode = [&](std::size_t s) {
        for (unsigned a = 0; a < dim; ++a) {
            coord[a] = static_cast<unsigned>(s / stride[a]);
            s %= stride[a];
        }
    };

    for (std::size_t s = 0; s < n; ++s) {
        decode(s);
        unsigned degree = 0;
        for (unsigned a = 0; a < dim; ++a) {
            degree += (coord[a] > 0) + (coord[a] + 1 < side);
        }
        offsets[s + 1] = offsets[s] + static_cast<std::int32_t>(degree);
    }

    std::vector<std::int32_t> neighbors(static_cast<std::size_t>(offsets[n]));
    std::vector<std::int32_t> low;
    std::vector<std::int32_t> high;
    for (std::size_t s = 0; s < n; ++s) {
        decode(s);
        std::int32_t pos = offsets[s];
        for (unsigned a = 0; a < dim; ++a) {
            if (coord[a] > 0) {
                neighbors[pos++] = static_cast<std::int32_t>(s - stride[a]);
            }
            if (coord[a] + 1 < side) {
                neighbors[pos++] = static_cast<std::int32_t>(s + stride[a]);
            }
        }
        if (coord[0] == 0) {
            low.push_back(static_cast<std::int32_t>(s));
        }
        if (coord[0] + 1 == side) {
            high.push_back(static_cast<std::int32_t>(s));
        }
    }
    return Lattice(g, n, std::move(offsets), std::move(neighbors), std::move(low), std::move(high));
}

// Two-dimensional lattices with per-site neighbor offsets (triangular and
// honeycomb). `offsets_of` fills (dr,dc) pairs and returns how many.
template <typename OffsetsFn>
Lattice build_2d(const LatticeGeometry& g, OffsetsFn&& offsets_of) {
    const std::size_t side = g.side;
    const std::size_t n = checked_power(side, 2);
    check_edge_capacity(n, 6);
    std::vector<std::vector<std::int32_t>> adjacency(n);
    std::array<std::pair<int, int>, 6> deltas{};
    for (std::size_t r = 0; r < side; ++r) {
        for (std::size_t c = 0; c < side; ++c) {
            const std::size_t s = r * side + c;
            const unsigned count = offsets_of(r, c, deltas);
            for (unsigned k = 0; k < count; ++k) {
                const long long rr = static_cast<long long>(r) + deltas[k].first;
                const long long cc = static_cast<long long>(c) + deltas[k].second;
                if (rr >= 0 && cc >= 0 && rr < static_cast<long long>(side) &&
                    cc < static_cast<long long>(side)) {
                    adjacency[s].push_back(static_cast<std::int32_t>(rr * side + cc));
                }
            }
        }
    }
    std::vector<std::int32_t> low;
    std::vector<std::int32_t> high;
    for (std::size_t c = 0; c < side; ++c) {
        low.push_back(static_cast<std::int32_t>(c));
        high.push_back(static_cast<std::int32_t>((side - 1) * side + c));
    }
    return make_lattice(g, n, std::move(adjacency), std::move(low), std::move(high));
}

Lattice build_triangular(const LatticeGeometry& g) {
    // Square lattice sheared: rows shift by half a site, giving neighbors
    // (r, c+-1), (r+-1, c), (r+1, c-1), (r-1, c+1).
    return build_2d(g, [](std::size_t, std::size_t, std::array<std::pair<int, int>, 6>& d) {
        d = {{{0, -1}, {0, 1}, {-1, 0}, {1, 0}, {1, -1}, {-1, 1}}};
        return 6u;
    });
}

Lattice build_honeycomb(const LatticeGeometry& g) {
    // Brick-wall embedding: every site links east/west plus one vertical
    // bond whose direction alternates with the checkerboard parity.
    return build_2d(g, [](std::size_t r, std::size_t c, std::array<std::pair<int, int>, 6>& d) {
        d[0] = {0, -1};
        d[1] = {0, 1};
        d[2] = ((r + c) % 2 == 0) ? std::pair<int, int>{1, 0} : std::pair<int, int>{-1, 0};
        return 3u;
    });
}

Lattice build_bethe(const LatticeGeometry& g) {
    const unsigned z = g.bethe_z;
    const std::size_t n = bethe_site_count(z, g.generations);
    check_edge_capacity(n, z);
    std::vector<std::vector<std::int32_t>> adjacency(n);
    std::vector<std::int32_t> frontier{0};
    std::int32_t next_id = 1;
    for (std::size_t gen = 1; gen <= g.generations; ++gen) {
        std::vector<std::int32_t> grown;
        for (const std::int32_t node : frontier) {
            const unsigned children = (node == 0) ? z : z - 1;
            for (unsigned k = 0; k < children; ++k) {
                const std::int32_t id = next_id++;
                adjacency[node].push_back(id);
                adjacency[id].push_back(node);
                grown.push_back(id);
            }
        }
        frontier = std::move(grown);
    }
    return make_lattice(g, n, std::move(adjacency), {}, {});
}

void fill_occupancy(std::size_t n, double p, Engine& rng, std::vector<std::uint8_t>& occ,
                    std::size_t& occupied_count) {
    occ.resize(n);
    std::size_t count = 0;
    for (std::size_t s = 0; s < n; ++s) {
        const bool on = uniform_unit(rng) < p;
        occ[s] = on;
        count += on;
    }
    occupied_count = count;
}

void unite_occupied(const Lattice& lattice, const std::vector<std::uint8_t>& occ,
                    UnionFind& uf) {
    const std::size_t n = lattice.site_count();
    for (std::size_t s = 0; s < n; ++s) {
        if (!occ[s]) {
            continue;
        }
        for (const std::int32_t t : lattice.neighbors(s)) {
            if (static_cast<std::size_t>(t) < s && occ[t]) {
                uf.unite(static_cast<std::int32_t>(s), t);
            }
        }
    }
}

// Spanning via two virtual sites fused to the opposite faces.
bool spanning_trial(const Lattice& lattice, const std::vector<std::uint8_t>& occ,
                    UnionFind& uf) {
    const std::size_t n = lattice.site_count();
    uf.reset(n + 2);
    const auto v_low = static_cast<std::int32_t>(n);
    const auto v_high = static_cast<std::int32_t>(n + 1);
    unite_occupied(lattice, occ, uf);
    for (const std::int32_t s : lattice.low_face()) {
        if (occ[s]) {
            uf.unite(v_low, s);
        }
    }
    for (const std::int32_t s : lattice.high_face()) {
        if (occ[s]) {
            uf.unite(v_high, s);
        }
    }
    return uf.find(v_low) == uf.find(v_high);
}

// Size-weighted mean over one realization; NaN marks an empty lattice.
double mean_cluster_trial(const Lattice& lattice, const std::vector<std::uint8_t>& occ,
                          std::size_t occupied_count, UnionFind& uf) {
    if (occupied_count == 0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const std::size_t n = lattice.site_count();
    uf.reset(n);
    unite_occupied(lattice, occ, uf);
    double sum_sq = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        if (occ[s] && uf.parent[s] == static_cast<std::int32_t>(s)) {
            const double size = uf.size[s];
            sum_sq += size * size;
        }
    }
    return sum_sq / static_cast<double>(occupied_count);
}

void require_spanning_faces(const Lattice& lattice) {
    if (!lattice.has_spanning_faces()) {
        throw UnsupportedGeometryError(std::string("spanning is undefined for ") +
                                       to_string(lattice.geometry().kind) +
                                       " (no opposite faces)");
    }
}

} // namespace

const char* to_string(LatticeKind k) noexcept {
    switch (k) {
        case LatticeKind::Linear1D: return "linear-1d";
        case LatticeKind::Ring1D: return "ring-1d";
        case LatticeKind::Honeycomb2D: return "honeycomb-2d";
        case LatticeKind::Square2D: return "square-2d";
        case LatticeKind::Triangular2D: return "triangular-2d";
        case LatticeKind::Diamond3D: return "diamond-3d";
        case LatticeKind::SimpleCubic3D: return "simple-cubic-3d";
        case LatticeKind::Bcc3D: return "bcc-3d";
        case LatticeKind::Fcc3D: return "fcc-3d";
        case LatticeKind::Hypercubic4D: return "hypercubic-4d";
        case LatticeKind::Hypercubic5D: return "hypercubic-5d";
        case LatticeKind::Hypercubic6D: return "hypercubic-6d";
        case LatticeKind::Hypercubic7D: return "hypercubic-7d";
        case LatticeKind::Bethe: return "bethe";
    }
    return "unknown";
}

LatticeKind lattice_kind_from_string(const std::string& name) {
    static constexpr LatticeKind kAll[] = {
        LatticeKind::Linear1D,      LatticeKind::Ring1D,       LatticeKind::Honeycomb2D,
        LatticeKind::Square2D,      LatticeKind::Triangular2D, LatticeKind::Diamond3D,
        LatticeKind::SimpleCubic3D, LatticeKind::Bcc3D,        LatticeKind::Fcc3D,
        LatticeKind::Hypercubic4D,  LatticeKind::Hypercubic5D, LatticeKind::Hypercubic6D,
        LatticeKind::Hypercubic7D,  LatticeKind::Bethe,
    };
    for (const LatticeKind k : kAll) {
        if (name == to_string(k)) {
            return k;
        }
    }
    throw ValidationError("unknown lattice geometry: " + name);
}

LatticeGeometry LatticeGeometry::linear(std::size_t length) {
    return {LatticeKind::Linear1D, length, 0, 0};
}
LatticeGeometry LatticeGeometry::ring(std::size_t length) {
    return {LatticeKind::Ring1D, length, 0, 0};
}
LatticeGeometry LatticeGeometry::honeycomb(std::size_t side) {
    return {LatticeKind::Honeycomb2D, side, 0, 0};
}
LatticeGeometry LatticeGeometry::square(std::size_t side) {
    return {LatticeKind::Square2D, side, 0, 0};
}
LatticeGeometry LatticeGeometry::triangular(std::size_t side) {
    return {LatticeKind::Triangular2D, side, 0, 0};
}
LatticeGeometry LatticeGeometry::simple_cubic(std::size_t side) {
    return {LatticeKind::SimpleCubic3D, side, 0, 0};
}
LatticeGeometry LatticeGeometry::hypercubic(unsigned dimension, std::size_t side) {
    switch (dimension) {
        case 1: return linear(side);
        case 2: return square(side);
        case 3: return simple_cubic(side);
        case 4: return {LatticeKind::Hypercubic4D, side, 0, 0};
        case 5: return {LatticeKind::Hypercubic5D, side, 0, 0};
        case 6: return {LatticeKind::Hypercubic6D, side, 0, 0};
        case 7: return {LatticeKind::Hypercubic7D, side, 0, 0};
        default:
            throw ValidationError("hypercubic dimension must lie in 1..7, got " +
                                  std::to_string(dimension));
    }
}
LatticeGeometry LatticeGeometry::bethe(unsigned z, std::size_t generations) {
    return {LatticeKind::Bethe, 0, generations, z};
}

unsigned LatticeGeometry::dimension() const {
    switch (kind) {
        case LatticeKind::Linear1D:
        case LatticeKind::Ring1D: return 1;
        case LatticeKind::Honeycomb2D:
        case LatticeKind::Square2D:
        case LatticeKind::Triangular2D: return 2;
        case LatticeKind::Diamond3D:
        case LatticeKind::SimpleCubic3D:
        case LatticeKind::Bcc3D:
        case LatticeKind::Fcc3D: return 3;
        case LatticeKind::Hypercubic4D: return 4;
        case LatticeKind::Hypercubic5D: return 5;
        case LatticeKind::Hypercubic6D: return 6;
        case LatticeKind::Hypercubic7D: return 7;
        case LatticeKind::Bethe: return 0;
    }
    return 0;
}

unsigned LatticeGeometry::coordination() const {
    switch (kind) {
        case LatticeKind::Linear1D:
        case LatticeKind::Ring1D: return 2;
        case LatticeKind::Honeycomb2D: return 3;
        case LatticeKind::Square2D: return 4;
        case LatticeKind::Triangular2D: return 6;
        case LatticeKind::Diamond3D: return 4;
        case LatticeKind::SimpleCubic3D: return 6;
        case LatticeKind::Bcc3D: return 8;
        case LatticeKind::Fcc3D: return 12;
        case LatticeKind::Hypercubic4D: return 8;
        case LatticeKind::Hypercubic5D: return 10;
        case LatticeKind::Hypercubic6D: return 12;
        case LatticeKind::Hypercubic7D: return 14;
        case LatticeKind::Bethe: return bethe_z;
    }
    return 0;
}

void LatticeGeometry::validate() const {
    if (kind == LatticeKind::Bethe) {
        if (bethe_z < 2) {
            throw ValidationError("Bethe coordination z must be >= 2");
        }
        bethe_site_count(bethe_z, generations);
        return;
    }
    if (side == 0) {
        throw ValidationError("side length must be >= 1");
    }
    checked_power(side, std::max(1u, dimension()));
}

Lattice::Lattice(LatticeGeometry geometry, std::size_t site_count,
                 std::vector<std::int32_t> offsets, std::vector<std::int32_t> neighbors,
                 std::vector<std::int32_t> low_face, std::vector<std::int32_t> high_face)
    : geometry_(geometry),
      site_count_(site_count),
      offsets_(std::move(offsets)),
      neighbors_(std::move(neighbors)),
      low_face_(std::move(low_face)),
      high_face_(std::move(high_face)) {}

Lattice build_lattice(const LatticeGeometry& g) {
    g.validate();
    switch (g.kind) {
        case LatticeKind::Linear1D: return build_chain(g, /*wrap=*/false);
        case LatticeKind::Ring1D: return build_chain(g, /*wrap=*/true);
        case LatticeKind::Honeycomb2D: return build_honeycomb(g);
        case LatticeKind::Square2D: return build_hypercubic(g, 2);
        case LatticeKind::Triangular2D: return build_triangular(g);
        case LatticeKind::SimpleCubic3D: return build_hypercubic(g, 3);
        case LatticeKind::Hypercubic4D: return build_hypercubic(g, 4);
        case LatticeKind::Hypercubic5D: return build_hypercubic(g, 5);
        case LatticeKind::Hypercubic6D: return build_hypercubic(g, 6);
        case LatticeKind::Hypercubic7D: return build_hypercubic(g, 7);
        case LatticeKind::Bethe: return build_bethe(g);
        case LatticeKind::Diamond3D:
        case LatticeKind::Bcc3D:
        case LatticeKind::Fcc3D:
            throw UnsupportedGeometryError(
                std::string(to_string(g.kind)) +
                " has a reference threshold but no adjacency builder");
    }
    throw ValidationError("unhandled lattice kind");
}

Occupancy occupy(const Lattice& lattice, double p, std::uint64_t seed) {
    check_probability(p);
    Occupancy occ;
    occ.p = p;
    occ.seed = seed;
    Engine rng{splitmix64(seed)};
    fill_occupancy(lattice.site_count(), p, rng, occ.occupied, occ.occupied_count);
    return occ;
}

ClusterStats label_clusters(const Lattice& lattice, const Occupancy& occ) {
    const std::size_t n = lattice.site_count();
    if (occ.occupied.size() != n) {
        throw ValidationError("occupancy size does not match lattice site count");
    }
    UnionFind uf;
    uf.reset(n);
    unite_occupied(lattice, occ.occupied, uf);

    ClusterStats stats;
    double sum_sq = 0.0;
    std::size_t sum = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (occ.occupied[s] && uf.parent[s] == static_cast<std::int32_t>(s)) {
            const std::size_t size = static_cast<std::size_t>(uf.size[s]);
            stats.sizes.push_back(size);
            sum_sq += static_cast<double>(size) * static_cast<double>(size);
            sum += size;
        }
    }
    if (sum > 0) {
        stats.size_weighted_mean = sum_sq / static_cast<double>(sum);
    }

    if (lattice.has_spanning_faces()) {
        std::vector<std::uint8_t> touch(n, 0);
        for (const std::int32_t s : lattice.low_face()) {
            if (occ.occupied[s]) {
                touch[uf.find(s)] |= 1;
            }
        }
        for (const std::int32_t s : lattice.high_face()) {
            if (occ.occupied[s] && (touch[uf.find(s)] |= 2) == 3) {
                stats.spanning = true;
                break;
            }
        }
    }
    return stats;
}

double spanning_probability(const Lattice& lattice, double p, std::size_t trials,
                            std::uint64_t seed, unsigned threads) {
    require_spanning_faces(lattice);
    check_probability(p);
    if (trials == 0) {
        throw ValidationError("trials must be >= 1");
    }

    constexpr std::size_t kBlock = 8;
    const std::size_t n_blocks = (trials + kBlock - 1) / kBlock;
    std::vector<std::size_t> block_hits(n_blocks, 0);
    detail::parallel_blocks(n_blocks, threads, [&] {
        return [&, uf = UnionFind(), occ = std::vector<std::uint8_t>()](std::size_t b) mutable {
            const std::size_t first = b * kBlock;
            const std::size_t last = std::min(trials, first + kBlock);
            std::size_t hits = 0;
            for (std::size_t trial = first; trial < last; ++trial) {
                Engine rng = make_engine(seed, trial);
                std::size_t occupied = 0;
                fill_occupancy(lattice.site_count(), p, rng, occ, occupied);
                hits += spanning_trial(lattice, occ, uf);
            }
            block_hits[b] = hits;
        };
    });
    const std::size_t total = std::accumulate(block_hits.begin(), block_hits.end(), std::size_t{0});
    return static_cast<double>(total) / static_cast<double>(trials);
}

double spanning_probability(const LatticeGeometry& g, double p, std::size_t trials,
                            std::uint64_t seed, unsigned threads) {
    return spanning_probability(build_lattice(g), p, trials, seed, threads);
}

double empirical_mean_cluster_size(const Lattice& lattice, double p, std::size_t trials,
                                   std::uint64_t seed, unsigned threads) {
    check_probability(p);
    if (trials == 0) {
        throw ValidationError("trials must be >= 1");
    }

    std::vector<double> per_trial(trials, std::numeric_limits<double>::quiet_NaN());
    constexpr std::size_t kBlock = 4;
    const std::size_t n_blocks = (trials + kBlock - 1) / kBlock;
    detail::parallel_blocks(n_blocks, threads, [&] {
        return [&, uf = UnionFind(), occ = std::vector<std::uint8_t>()](std::size_t b) mutable {
            const std::size_t first = b * kBlock;
            const std::size_t last = std::min(trials, first + kBlock);
            for (std::size_t trial = first; trial < last; ++trial) {
                Engine rng = make_engine(seed, trial);
                std::size_t occupied = 0;
                fill_occupancy(lattice.site_count(), p, rng, occ, occupied);
                per_trial[trial] = mean_cluster_trial(lattice, occ, occupied, uf);
            }
        };
    });

    double sum = 0.0;
    std::size_t used = 0;
    for (const double v : per_trial) {
        if (!std::isnan(v)) {
            sum += v;
            ++used;
        }
    }
    return used > 0 ? sum / static_cast<double>(used) : 1.0;
}

double empirical_mean_cluster_size(const LatticeGeometry& g, double p, std::size_t trials,
                                   std::uint64_t seed, unsigned threads) {
    return empirical_mean_cluster_size(build_lattice(g), p, trials, seed, threads);
}

ThresholdEstimate estimate_threshold(const LatticeGeometry& g, std::size_t trials_per_step,
                                     std::uint64_t seed, std::size_t max_steps,
                                     double tolerance, unsigned threads) {
    g.validate();
    if (g.kind == LatticeKind::Bethe) {
        ThresholdEstimate est;
        est.p_c = 1.0 / (static_cast<double>(g.bethe_z) - 1.0);
        est.analytic = true;
        return est;
    }
    if (trials_per_step == 0) {
        throw ValidationError("trials_per_step must be >= 1");
    }
    if (!(tolerance > 0.0)) {
        throw ValidationError("tolerance must be > 0");
    }

    const Lattice lattice = build_lattice(g);
    require_spanning_faces(lattice);

    // Fully occupied lattice must span, otherwise bisection has no bracket.
    {
        UnionFind uf;
        const std::vector<std::uint8_t> full(lattice.site_count(), 1);
        if (!spanning_trial(lattice, full, uf)) {
            throw ConvergenceError(std::string(to_string(g.kind)) +
                                   " cannot span even when fully occupied");
        }
    }

    double lo = 0.0;
    double hi = 1.0;
    std::size_t steps = 0;
    while (steps < max_steps && 0.5 * (hi - lo) > tolerance) {
        const double mid = 0.5 * (lo + hi);
        const double r = spanning_probability(lattice, mid, trials_per_step,
                                              substream_seed(seed, steps), threads);
        if (r < 0.5) {
            lo = mid;
        } else {
            hi = mid;
        }
        ++steps;
    }
    if (0.5 * (hi - lo) > tolerance) {
        throw ConvergenceError("bisection stopped at half-width " +
                               std::to_string(0.5 * (hi - lo)) + " > tolerance " +
                               std::to_string(tolerance) + " after " +
                               std::to_string(steps) + " steps");
    }

    ThresholdEstimate est;
    est.p_c = 0.5 * (lo + hi);
    est.half_width = 0.5 * (hi - lo);
    est.sites = lattice.site_count();
    est.trials_per_step = trials_per_step;
    est.steps = steps;
    return est;
}

std::span<const ThresholdReference> reference_thresholds() noexcept {
    static constexpr ThresholdReference kTable[] = {
        {"1d", "linear", 2, 1.0},
        {"2d", "honeycomb", 3, 0.696},
        {"2d", "square", 4, 0.593},
        {"2d", "triangular", 6, 0.5},
        {"3d", "diamond", 4, 0.430},
        {"3d", "simple cubic", 6, 0.312},
        {"3d", "body centered cubic", 8, 0.246},
        {"3d", "face centered cubic", 12, 0.198},
        {"4d", "hypercubic", 8, 0.197},
        {"5d", "hypercubic", 10, 0.141},
        {"6d", "hypercubic", 12, 0.107},
        {"7d", "hypercubic", 14, 0.089},
    };
    return kTable;
}

double reference_threshold(const LatticeGeometry& g) {
    switch (g.kind) {
        case LatticeKind::Linear1D:
        case LatticeKind::Ring1D: return 1.0;
        case LatticeKind::Honeycomb2D: return 0.696;
        case LatticeKind::Square2D: return 0.593;
        case LatticeKind::Triangular2D: return 0.5;
        case LatticeKind::Diamond3D: return 0.430;
        case LatticeKind::SimpleCubic3D: return 0.312;
        case LatticeKind::Bcc3D: return 0.246;
        case LatticeKind::Fcc3D: return 0.198;
        case LatticeKind::Hypercubic4D: return 0.197;
        case LatticeKind::Hypercubic5D: return 0.141;
        case LatticeKind::Hypercubic6D: return 0.107;
        case LatticeKind::Hypercubic7D: return 0.089;
        case LatticeKind::Bethe: return 1.0 / (static_cast<double>(g.bethe_z) - 1.0);
    }
    throw ValidationError("unhandled lattice kind");
}

} // namespace rulelat
