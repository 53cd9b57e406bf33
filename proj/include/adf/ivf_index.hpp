#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "adf/geo.hpp"

namespace adf {

/// Search-time knobs: how many neighbors to return and how many inverted
/// lists to scan. nprobe = nlist makes the search exact.
struct SearchParams {
    std::size_t k = 100;
    std::size_t nprobe = 16;
};

/// Result of a k-NN query. Distances are squared meters, sorted ascending;
/// ties are broken by smaller point index. May hold fewer than k entries when
/// the scanned lists are exhausted — callers must not assume size() == k.
struct NeighborSet {
    std::vector<std::size_t> indices;
    std::vector<double> sq_dists;

    std::size_t size() const { return indices.size(); }
    bool empty() const { return indices.empty(); }
};

enum class KMeansInit : std::uint8_t {
    kRandomPoints,  // seeded sample of distinct input points
};

struct KMeansConfig {
    int max_iters = 25;
    std::uint64_t seed = 0;
    KMeansInit init = KMeansInit::kRandomPoints;
    // Lloyd iterations run on at most sample_per_list * nlist points (0 = all).
    // The final assignment always covers every point.
    std::size_t sample_per_list = 256;
};

/// Inverted-file index over 3D ECEF points: a coarse k-means quantizer plus
/// one list of point indices per centroid. Immutable once trained; concurrent
/// searches against a shared index are safe.
class IvfIndex {
public:
    /// Runs k-means with `nlist` clusters and assigns every point to the list
    /// of its nearest centroid. Deterministic for fixed (points, nlist, seed).
    /// Throws TooFewPoints when |points| < nlist, NonFiniteInput on bad data.
    static IvfIndex train(std::vector<EcefCoord> points, std::size_t nlist,
                          const KMeansConfig& cfg = {});

    /// Exact k-NN restricted to the union of the nprobe nearest centroids'
    /// lists. Throws EmptyIndex when the index holds no points.
    NeighborSet search(const EcefCoord& query, const SearchParams& params) const;

    /// All indexed points within `radius_m` of the query, sorted ascending.
    /// Exact: lists are pruned with per-list member radii, never skipped
    /// heuristically.
    NeighborSet radius_search(const EcefCoord& query, double radius_m) const;

    // Snapshot file, little-endian:
    //   magic "ADFI", u32 version=1, u64 n_points, u32 nlist,
    //   centroids as nlist x 3 f64,
    //   per list: u64 length, then u64 point indices,
    //   points as n_points x 3 f64.
    void save(const std::filesystem::path& path) const;
    static IvfIndex load(const std::filesystem::path& path);

    std::size_t nlist() const { return centroids_.size(); }
    std::size_t size() const { return points_.size(); }
    std::span<const EcefCoord> centroids() const { return centroids_; }
    std::span<const EcefCoord> points() const { return points_; }
    const std::vector<std::vector<std::uint64_t>>& lists() const {
        return lists_;
    }

    /// Checks the partition invariant (every point index in exactly one
    /// list). Throws InternalError on violation.
    void validate() const;

private:
    IvfIndex() = default;
    void rebuild_list_radii();

    std::vector<EcefCoord> centroids_;
    std::vector<std::vector<std::uint64_t>> lists_;
    std::vector<EcefCoord> points_;
    // Max distance (meters) from each centroid to its list members; derived,
    // not persisted. Used for exact radius-search pruning.
    std::vector<double> list_radii_;
};

/// Exact k nearest points by squared Euclidean distance over a flat array;
/// ties broken by smaller index. Throws EmptyIndex on an empty input.
NeighborSet brute_force_search(std::span<const EcefCoord> points,
                               const EcefCoord& query, std::size_t k);

/// Default list count: min(4096, max(1, 4*floor(sqrt(n)))), clamped to n.
std::size_t default_nlist(std::size_t n_points);

}  // namespace adf
