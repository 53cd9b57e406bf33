#pragma once

// Independent, deliberately simple second implementations of the library's
// hot kernels. Everything here is serial, quadratic where that is the
// simplest correct form, and shares no code with the optimized paths, so the
// test suites can use it as an oracle and the benchmark as a baseline.

#include <cstddef>
#include <span>
#include <vector>

#include "adf/evaluation.hpp"
#include "adf/field.hpp"
#include "adf/geo.hpp"
#include "adf/ivf_index.hpp"

namespace ref {

/// Exact k nearest by scanning every point; (distance, index) ordering.
adf::NeighborSet knn(std::span<const adf::EcefCoord> points,
                     const adf::EcefCoord& query, std::size_t k);

/// All points within radius_m, ascending (distance, index).
adf::NeighborSet radius_scan(std::span<const adf::EcefCoord> points,
                             const adf::EcefCoord& query, double radius_m);

/// Field value as the full sum over every point (no neighbor cut), plain
/// serial accumulation in point order. Matches the optimized evaluator when
/// k >= n and nprobe = nlist.
double field_full_sum(std::span<const adf::EcefCoord> points,
                      std::span<const double> scores,
                      const adf::EcefCoord& query, const adf::AdfParams& params);

/// Field value over the k nearest points found by ref::knn, serial sum.
double field_knn_sum(std::span<const adf::EcefCoord> points,
                     std::span<const double> scores,
                     const adf::EcefCoord& query, const adf::AdfParams& params);

/// Serial batch evaluation through the index (same math as the library's
/// parallel evaluate_many, minus the pragma); benchmark baseline.
std::vector<double> field_many_serial(const adf::IvfIndex& index,
                                      std::span<const double> scores,
                                      std::span<const adf::EcefCoord> queries,
                                      const adf::AdfParams& params);

/// Percentile recomputed by a different route (two nth_element selections
/// plus interpolation).
double percentile(std::vector<double> values, double pct);

/// Greedy one-to-one matching recounted from a quadratic pair enumeration.
adf::MatchReport match_recount(std::span<const adf::EcefCoord> set_a,
                               std::span<const adf::EcefCoord> set_b,
                               double threshold_m);

}  // namespace ref
