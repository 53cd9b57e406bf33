#include "adf/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "adf/errors.hpp"
#include "adf/rng.hpp"

namespace adf {
namespace {

struct CandidatePair {
    double sq_dist;
    std::size_t ia;
    std::size_t ib;
    bool operator<(const CandidatePair& o) const {
        if (sq_dist != o.sq_dist) return sq_dist < o.sq_dist;
        if (ia != o.ia) return ia < o.ia;
        return ib < o.ib;
    }
};

MatchReport match_against_index(std::span<const EcefCoord> set_a,
                                std::size_t n_b, const IvfIndex& index_b,
                                double threshold_m) {
    if (!(threshold_m > 0.0) || !std::isfinite(threshold_m)) {
        throw DataError("match threshold must be a positive length");
    }
    if (set_a.empty() || n_b == 0) {
        return MatchReport::from_counts(0, set_a.size(), n_b, threshold_m);
    }

    std::vector<CandidatePair> pairs;
    for (std::size_t ia = 0; ia < set_a.size(); ++ia) {
        const NeighborSet near = index_b.radius_search(set_a[ia], threshold_m);
        for (std::size_t j = 0; j < near.size(); ++j) {
            pairs.push_back({near.sq_dists[j], ia, near.indices[j]});
        }
    }
    std::sort(pairs.begin(), pairs.end());

    std::vector<std::uint8_t> used_a(set_a.size(), 0), used_b(n_b, 0);
    std::size_t matched = 0;
    for (const auto& p : pairs) {
        if (used_a[p.ia] || used_b[p.ib]) continue;
        used_a[p.ia] = 1;
        used_b[p.ib] = 1;
        ++matched;
    }
    return MatchReport::from_counts(matched, set_a.size() - matched,
                                    n_b - matched, threshold_m);
}

}  // namespace

MatchReport MatchReport::from_counts(std::size_t matched, std::size_t unique_a,
                                     std::size_t unique_b, double threshold_m) {
    MatchReport r;
    r.matched = matched;
    r.unique_a = unique_a;
    r.unique_b = unique_b;
    r.threshold_m = threshold_m;
    const auto m = static_cast<double>(matched);
    const std::size_t total_b = matched + unique_b;
    const std::size_t total_a = matched + unique_a;
    r.precision = total_b == 0 ? 0.0 : m / static_cast<double>(total_b);
    r.recall = total_a == 0 ? 0.0 : m / static_cast<double>(total_a);
    const double pr = r.precision + r.recall;
    r.f1 = pr == 0.0 ? 0.0 : 2.0 * r.precision * r.recall / pr;
    return r;
}

MatchReport spatial_match(std::span<const EcefCoord> set_a,
                          std::span<const EcefCoord> set_b,
                          double threshold_m) {
    if (set_a.empty() || set_b.empty()) {
        if (!(threshold_m > 0.0) || !std::isfinite(threshold_m)) {
            throw DataError("match threshold must be a positive length");
        }
        return MatchReport::from_counts(0, set_a.size(), set_b.size(),
                                        threshold_m);
    }
    // The index only accelerates candidate enumeration (radius_search is
    // exact), so clustering quality cannot change the report.
    const IvfIndex index_b = IvfIndex::train(
        std::vector<EcefCoord>(set_b.begin(), set_b.end()),
        default_nlist(set_b.size()));
    return match_against_index(set_a, set_b.size(), index_b, threshold_m);
}

std::vector<MatchReport> threshold_sweep(std::span<const EcefCoord> set_a,
                                         std::span<const EcefCoord> set_b,
                                         std::span<const double> thresholds_m) {
    for (std::size_t i = 0; i < thresholds_m.size(); ++i) {
        if (!(thresholds_m[i] > 0.0) || !std::isfinite(thresholds_m[i])) {
            throw DataError("thresholds must be positive lengths");
        }
        if (i > 0 && thresholds_m[i] < thresholds_m[i - 1]) {
            throw DataError("thresholds must be sorted ascending");
        }
    }
    std::vector<MatchReport> reports;
    reports.reserve(thresholds_m.size());
    if (set_a.empty() || set_b.empty()) {
        for (const double t : thresholds_m) {
            reports.push_back(
                MatchReport::from_counts(0, set_a.size(), set_b.size(), t));
        }
        return reports;
    }
    const IvfIndex index_b = IvfIndex::train(
        std::vector<EcefCoord>(set_b.begin(), set_b.end()),
        default_nlist(set_b.size()));
    for (const double t : thresholds_m) {
        reports.push_back(match_against_index(set_a, set_b.size(), index_b, t));
    }
    return reports;
}

BenchReport latency_bench(const IvfIndex& index, std::span<const double> scores,
                          const AdfParams& params, BenchMode mode,
                          std::size_t n_queries, std::uint64_t seed) {
    if (n_queries < 100) {
        throw DataError("latency benchmark needs at least 100 queries");
    }
    validate_scores(scores, index.size());
    if (index.size() == 0) throw EmptyIndex("index holds no points");

    RngStream rng(seed, "bench/queries");
    const auto pts = index.points();
    std::vector<EcefCoord> queries;
    queries.reserve(n_queries);
    for (std::size_t q = 0; q < n_queries; ++q) {
        const EcefCoord base = pts[rng.uniform_index(pts.size())];
        queries.push_back({base.x_m + params.sigma0_m * rng.normal(),
                           base.y_m + params.sigma0_m * rng.normal(),
                           base.z_m + params.sigma0_m * rng.normal()});
    }

    BenchReport report;
    report.n_queries = n_queries;
    report.mode = mode;
    report.params = params;
    report.values.resize(n_queries);

    const auto start = std::chrono::steady_clock::now();
    for (std::size_t q = 0; q < n_queries; ++q) {
        report.values[q] =
            mode == BenchMode::kIvf
                ? evaluate(index, scores, queries[q], params)
                : evaluate_brute(pts, scores, queries[q], params);
    }
    const auto stop = std::chrono::steady_clock::now();
    const double total_ms =
        std::chrono::duration<double, std::milli>(stop - start).count();
    report.ms_per_query = total_ms / static_cast<double>(n_queries);
    return report;
}

}  // namespace adf
