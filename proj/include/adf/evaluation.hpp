#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "adf/field.hpp"
#include "adf/geo.hpp"
#include "adf/ivf_index.hpp"

namespace adf {

/// Counts and derived metrics of a one-to-one spatial match. Set A plays the
/// reference role (recall denominator), set B the detection role (precision
/// denominator).
struct MatchReport {
    std::size_t matched = 0;   // one-to-one pairs within threshold
    std::size_t unique_a = 0;  // A points left unmatched
    std::size_t unique_b = 0;  // B points left unmatched
    double threshold_m = 0.0;
    double precision = 0.0;  // matched / (matched + unique_b)
    double recall = 0.0;     // matched / (matched + unique_a)
    double f1 = 0.0;         // 2PR/(P+R), 0 when P+R = 0

    static MatchReport from_counts(std::size_t matched, std::size_t unique_a,
                                   std::size_t unique_b, double threshold_m);
};

/// Greedy one-to-one matching: all A-B pairs within the threshold, sorted by
/// (distance, index_a, index_b), consumed nearest-first with each point used
/// at most once. Deterministic; matched counts are nondecreasing in the
/// threshold. Empty sets yield zero counts, never an error.
/// Throws DataError unless threshold_m > 0.
MatchReport spatial_match(std::span<const EcefCoord> set_a,
                          std::span<const EcefCoord> set_b,
                          double threshold_m);

/// One report per threshold over a shared candidate index. Thresholds must
/// be positive and sorted ascending.
std::vector<MatchReport> threshold_sweep(std::span<const EcefCoord> set_a,
                                         std::span<const EcefCoord> set_b,
                                         std::span<const double> thresholds_m);

enum class BenchMode : std::uint8_t { kIvf, kBrute };

struct BenchReport {
    double ms_per_query = 0.0;
    std::size_t n_queries = 0;
    BenchMode mode = BenchMode::kIvf;
    AdfParams params;
    // Field values per query, in query order: lets callers verify that both
    // modes computed the same thing and keeps the timed loop observable.
    std::vector<double> values;
};

/// Times field evaluation over seeded random queries scattered around the
/// indexed points (data point + sigma0-scale Gaussian offset, stream label
/// "bench/queries"). Single-threaded in both modes so the ratio compares
/// algorithms, not scheduling. Throws DataError when n_queries < 100.
BenchReport latency_bench(const IvfIndex& index, std::span<const double> scores,
                          const AdfParams& params, BenchMode mode,
                          std::size_t n_queries, std::uint64_t seed);

}  // namespace adf
