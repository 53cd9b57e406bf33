#include "adf/ivf_index.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "adf/errors.hpp"
#include "adf/rng.hpp"

namespace adf {
namespace {

constexpr char kMagic[4] = {'A', 'D', 'F', 'I'};
constexpr std::uint32_t kVersion = 1;

bool is_finite(const EcefCoord& p) {
    return std::isfinite(p.x_m) && std::isfinite(p.y_m) && std::isfinite(p.z_m);
}

// (squared distance, point index) candidate. Lexicographic operator< makes
// the default priority_queue keep the *worst* candidate on top, and gives
// every sort below the smaller-index tie-break.
struct Cand {
    double sq_dist;
    std::uint64_t index;
    bool operator<(const Cand& o) const {
        return sq_dist != o.sq_dist ? sq_dist < o.sq_dist : index < o.index;
    }
};

void heap_offer(std::priority_queue<Cand>& heap, std::size_t k, Cand c) {
    if (heap.size() < k) {
        heap.push(c);
    } else if (c < heap.top()) {
        heap.pop();
        heap.push(c);
    }
}

NeighborSet drain_heap(std::priority_queue<Cand>& heap) {
    NeighborSet out;
    out.indices.resize(heap.size());
    out.sq_dists.resize(heap.size());
    for (std::size_t i = heap.size(); i-- > 0;) {
        out.indices[i] = static_cast<std::size_t>(heap.top().index);
        out.sq_dists[i] = heap.top().sq_dist;
        heap.pop();
    }
    return out;
}

// Strict < keeps the first (smallest-index) centroid on exact ties.
std::uint32_t nearest_centroid(std::span<const EcefCoord> centroids,
                               const EcefCoord& p) {
    std::uint32_t best = 0;
    double best_d = sq_dist(centroids[0], p);
    for (std::size_t j = 1; j < centroids.size(); ++j) {
        const double d = sq_dist(centroids[j], p);
        if (d < best_d) {
            best_d = d;
            best = static_cast<std::uint32_t>(j);
        }
    }
    return best;
}

void write_u32(std::ostream& os, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b, 4);
}

void write_u64(std::ostream& os, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b, 8);
}

void write_f64(std::ostream& os, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    write_u64(os, bits);
}

std::uint32_t read_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw DataError("index snapshot truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t read_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw DataError("index snapshot truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

double read_f64(std::istream& is) {
    const std::uint64_t bits = read_u64(is);
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

}  // namespace

std::size_t default_nlist(std::size_t n_points) {
    if (n_points == 0) return 1;
    const auto root =
        static_cast<std::size_t>(std::sqrt(static_cast<double>(n_points)));
    const std::size_t rule = std::max<std::size_t>(1, 4 * root);
    return std::min({static_cast<std::size_t>(4096), rule, n_points});
}

NeighborSet brute_force_search(std::span<const EcefCoord> points,
                               const EcefCoord& query, std::size_t k) {
    if (points.empty()) throw EmptyIndex("cannot search an empty point set");
    if (!is_finite(query)) throw NonFiniteInput("query has a non-finite coordinate");
    if (k == 0) return {};
    std::priority_queue<Cand> heap;
    for (std::size_t i = 0; i < points.size(); ++i) {
        heap_offer(heap, k, {sq_dist(points[i], query), i});
    }
    return drain_heap(heap);
}

IvfIndex IvfIndex::train(std::vector<EcefCoord> points, std::size_t nlist,
                         const KMeansConfig& cfg) {
    if (points.empty()) throw TooFewPoints("cannot train an index on zero points");
    if (nlist == 0) throw DataError("nlist must be at least 1");
    if (points.size() < nlist) {
        throw TooFewPoints("need at least nlist=" + std::to_string(nlist) +
                           " points, got " + std::to_string(points.size()));
    }
    for (const auto& p : points) {
        if (!is_finite(p)) throw NonFiniteInput("index input contains a non-finite coordinate");
    }

    IvfIndex idx;
    idx.points_ = std::move(points);
    const std::size_t n = idx.points_.size();

    if (nlist == 1) {
        // Single list: the optimal centroid is just the mean.
        double sx = 0, sy = 0, sz = 0;
        for (const auto& p : idx.points_) {
            sx += p.x_m;
            sy += p.y_m;
            sz += p.z_m;
        }
        const auto dn = static_cast<double>(n);
        idx.centroids_ = {{sx / dn, sy / dn, sz / dn}};
        idx.lists_.assign(1, std::vector<std::uint64_t>(n));
        std::iota(idx.lists_[0].begin(), idx.lists_[0].end(), 0);
        idx.rebuild_list_radii();
        return idx;
    }

    // Training subset: a seeded partial Fisher-Yates shuffle picks at most
    // sample_per_list points per list; the first nlist picks double as the
    // initial centroids. Lloyd cost is O(m * nlist) per iteration instead of
    // O(n * nlist); the final assignment below still covers every point.
    std::size_t m = n;
    if (cfg.sample_per_list != 0 && nlist <= n / cfg.sample_per_list) {
        m = cfg.sample_per_list * nlist;
    }
    m = std::max(m, nlist);

    RngStream rng(cfg.seed, "kmeans/init");
    std::vector<std::uint64_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = 0; i < m; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
        std::swap(order[i], order[j]);
    }

    std::vector<EcefCoord> centroids(nlist);
    for (std::size_t j = 0; j < nlist; ++j) centroids[j] = idx.points_[order[j]];

    std::vector<std::uint32_t> assign(m, 0);
    std::vector<std::uint32_t> prev;
    std::vector<double> sx(nlist), sy(nlist), sz(nlist);
    std::vector<std::size_t> count(nlist);
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(m); ++t) {
            assign[t] = nearest_centroid(centroids, idx.points_[order[t]]);
        }
        const bool changed = assign != prev;

        // Serial accumulation in a fixed order keeps the means byte-stable.
        std::fill(sx.begin(), sx.end(), 0.0);
        std::fill(sy.begin(), sy.end(), 0.0);
        std::fill(sz.begin(), sz.end(), 0.0);
        std::fill(count.begin(), count.end(), 0);
        for (std::size_t t = 0; t < m; ++t) {
            const auto& p = idx.points_[order[t]];
            sx[assign[t]] += p.x_m;
            sy[assign[t]] += p.y_m;
            sz[assign[t]] += p.z_m;
            ++count[assign[t]];
        }
        for (std::size_t j = 0; j < nlist; ++j) {
            if (count[j] == 0) continue;
            const auto dc = static_cast<double>(count[j]);
            centroids[j] = {sx[j] / dc, sy[j] / dc, sz[j] / dc};
        }

        // Empty-cluster repair: move the farthest member of the currently
        // largest cluster onto the empty slot. Deterministic tie-breaks
        // (smaller cluster / point index) keep training reproducible.
        bool repaired = false;
        for (std::size_t j = 0; j < nlist; ++j) {
            if (count[j] != 0) continue;
            std::size_t donor = 0;
            for (std::size_t d = 1; d < nlist; ++d) {
                if (count[d] > count[donor]) donor = d;
            }
            std::size_t far_t = m;
            double far_d = -1.0;
            for (std::size_t t = 0; t < m; ++t) {
                if (assign[t] != donor) continue;
                const double d = sq_dist(centroids[donor], idx.points_[order[t]]);
                if (d > far_d) {
                    far_d = d;
                    far_t = t;
                }
            }
            if (far_t == m) throw InternalError("empty-cluster repair found no donor member");
            centroids[j] = idx.points_[order[far_t]];
            assign[far_t] = static_cast<std::uint32_t>(j);
            --count[donor];
            ++count[j];
            repaired = true;
        }

        if (!changed && !repaired) break;
        prev = assign;
    }

    // Full assignment over every point; serial list build in ascending point
    // order so each inverted list comes out sorted.
    std::vector<std::uint32_t> full(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        full[i] = nearest_centroid(centroids, idx.points_[i]);
    }
    idx.centroids_ = std::move(centroids);
    idx.lists_.assign(nlist, {});
    for (std::size_t i = 0; i < n; ++i) idx.lists_[full[i]].push_back(i);
    idx.rebuild_list_radii();
    return idx;
}

void IvfIndex::rebuild_list_radii() {
    list_radii_.assign(centroids_.size(), 0.0);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(centroids_.size()); ++j) {
        double worst = 0.0;
        for (const auto i : lists_[j]) {
            worst = std::max(worst, sq_dist(centroids_[j], points_[i]));
        }
        list_radii_[j] = std::sqrt(worst);
    }
}

NeighborSet IvfIndex::search(const EcefCoord& query, const SearchParams& params) const {
    if (points_.empty()) throw EmptyIndex("index holds no points");
    if (!is_finite(query)) throw NonFiniteInput("query has a non-finite coordinate");
    if (params.k == 0) return {};
    const std::size_t nprobe = std::clamp<std::size_t>(params.nprobe, 1, centroids_.size());

    std::vector<Cand> cents(centroids_.size());
    for (std::size_t j = 0; j < centroids_.size(); ++j) {
        cents[j] = {sq_dist(query, centroids_[j]), j};
    }
    std::partial_sort(cents.begin(),
                      cents.begin() + static_cast<std::ptrdiff_t>(nprobe),
                      cents.end());

    std::priority_queue<Cand> heap;
    for (std::size_t p = 0; p < nprobe; ++p) {
        for (const auto i : lists_[cents[p].index]) {
            heap_offer(heap, params.k, {sq_dist(query, points_[i]), i});
        }
    }
    return drain_heap(heap);
}

NeighborSet IvfIndex::radius_search(const EcefCoord& query, double radius_m) const {
    if (points_.empty()) throw EmptyIndex("index holds no points");
    if (!is_finite(query) || !std::isfinite(radius_m)) {
        throw NonFiniteInput("radius query has a non-finite value");
    }
    if (radius_m < 0.0) throw DataError("radius must be non-negative");

    const double r2 = radius_m * radius_m;
    std::vector<Cand> hits;
    for (std::size_t j = 0; j < centroids_.size(); ++j) {
        if (lists_[j].empty()) continue;
        // Triangle inequality: every member sits within list_radii_[j] of the
        // centroid, so the whole list is out of range when the centroid is
        // farther than radius + list radius. The tiny slack only ever makes
        // us scan *more* lists, so rounding cannot drop a true hit.
        const double dc = std::sqrt(sq_dist(query, centroids_[j]));
        const double bound = radius_m + list_radii_[j];
        if (dc > bound + 1e-9 + 1e-12 * bound) continue;
        for (const auto i : lists_[j]) {
            const double d2 = sq_dist(query, points_[i]);
            if (d2 <= r2) hits.push_back({d2, i});
        }
    }
    std::sort(hits.begin(), hits.end());

    NeighborSet out;
    out.indices.reserve(hits.size());
    out.sq_dists.reserve(hits.size());
    for (const auto& h : hits) {
        out.indices.push_back(static_cast<std::size_t>(h.index));
        out.sq_dists.push_back(h.sq_dist);
    }
    return out;
}

void IvfIndex::save(const std::filesystem::path& path) const {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw DataError("cannot open " + path.string() + " for writing");
    os.write(kMagic, 4);
    write_u32(os, kVersion);
    write_u64(os, points_.size());
    write_u32(os, static_cast<std::uint32_t>(centroids_.size()));
    for (const auto& c : centroids_) {
        write_f64(os, c.x_m);
        write_f64(os, c.y_m);
        write_f64(os, c.z_m);
    }
    for (const auto& list : lists_) {
        write_u64(os, list.size());
        for (const auto i : list) write_u64(os, i);
    }
    for (const auto& p : points_) {
        write_f64(os, p.x_m);
        write_f64(os, p.y_m);
        write_f64(os, p.z_m);
    }
    os.flush();
    if (!os) throw DataError("failed writing " + path.string());
}

IvfIndex IvfIndex::load(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open " + path.string());
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0) {
        throw DataError("not an index snapshot (bad magic): " + path.string());
    }
    const auto version = read_u32(is);
    if (version != kVersion) {
        throw DataError("unsupported index snapshot version " + std::to_string(version));
    }
    const std::uint64_t n = read_u64(is);
    const std::uint32_t nlist = read_u32(is);
    if (n == 0 || nlist == 0) throw DataError("index snapshot is empty");

    IvfIndex idx;
    idx.centroids_.resize(nlist);
    for (auto& c : idx.centroids_) {
        c.x_m = read_f64(is);
        c.y_m = read_f64(is);
        c.z_m = read_f64(is);
    }
    idx.lists_.resize(nlist);
    std::uint64_t total = 0;
    for (auto& list : idx.lists_) {
        const std::uint64_t len = read_u64(is);
        total += len;
        if (total > n) throw DataError("index snapshot lists exceed the point count");
        list.resize(len);
        for (auto& i : list) {
            i = read_u64(is);
            if (i >= n) throw DataError("index snapshot references point " + std::to_string(i) + " of " + std::to_string(n));
        }
    }
    if (total != n) {
        throw DataError("index snapshot lists cover " + std::to_string(total) +
                        " of " + std::to_string(n) + " points");
    }
    idx.points_.resize(n);
    for (auto& p : idx.points_) {
        p.x_m = read_f64(is);
        p.y_m = read_f64(is);
        p.z_m = read_f64(is);
        if (!is_finite(p)) throw DataError("index snapshot contains a non-finite point");
    }
    idx.validate();
    idx.rebuild_list_radii();
    return idx;
}

void IvfIndex::validate() const {
    std::vector<std::uint8_t> seen(points_.size(), 0);
    std::size_t total = 0;
    for (const auto& list : lists_) {
        for (const auto i : list) {
            if (i >= points_.size() || seen[i]) {
                throw InternalError("index lists do not partition the point set");
            }
            seen[i] = 1;
            ++total;
        }
    }
    if (total != points_.size()) {
        throw InternalError("index lists do not cover every point");
    }
}

}  // namespace adf
