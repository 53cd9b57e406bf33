#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adf/geo.hpp"
#include "adf/ivf_index.hpp"

namespace adf {

/// Keeps the adaptive bandwidth finite when a contributor's score is zero.
inline constexpr double kScoreEpsilon = 1e-6;

/// Kernel terms below this are flushed to exact zero so that far-away
/// contributors cannot leave denormal dust in the running sum.
inline constexpr double kContributionFloor = 1e-300;

enum class BandwidthMode : std::uint8_t {
    kAdaptive,  // per-contributor sigma0 / (score + epsilon)
    kFixed,     // sigma0 for every contributor; score still weights the term
};

struct AdfParams {
    double sigma0_m = 500.0;
    std::size_t k = 100;
    std::size_t nprobe = 16;
    BandwidthMode bandwidth = BandwidthMode::kAdaptive;
};

/// Points with one saliency score each; scores are finite and non-negative.
struct ScoredPointSet {
    std::vector<EcefCoord> points;
    std::vector<double> scores;
};

/// Throws DataError / NonFiniteInput when sizes disagree or a score is
/// negative or non-finite.
void validate_scores(std::span<const double> scores, std::size_t n_points);

/// sigma0 / (score + epsilon): high-confidence contributors get a tight
/// kernel, low-confidence ones smear out.
double adaptive_bandwidth(double sigma0_m, double score);

/// exp(-0.5 * d^2 / sigma^2) in (0, 1].
double gaussian_kernel(double sq_dist_m2, double sigma_m);

/// One contributor's term of the field sum: score * gaussian_kernel, flushed
/// to exact zero below kContributionFloor.
double kernel_contribution(double score, double sq_dist_m2, double sigma_m);

/// Field value at `query`: kernel contributions of the k nearest contributors
/// found through the index, compensated-summed in ascending distance order.
/// The sum is intentionally unnormalized, so values scale with local count.
double evaluate(const IvfIndex& index, std::span<const double> scores,
                const EcefCoord& query, const AdfParams& params);

/// Same field value computed against a flat array with exhaustive k-NN; the
/// oracle path for accuracy checks and small inputs.
double evaluate_brute(std::span<const EcefCoord> points,
                      std::span<const double> scores, const EcefCoord& query,
                      const AdfParams& params);

/// One field value per query. Parallel over queries; element i is bit-equal
/// to evaluate(index, scores, queries[i], params).
std::vector<double> evaluate_many(const IvfIndex& index,
                                  std::span<const double> scores,
                                  std::span<const EcefCoord> queries,
                                  const AdfParams& params);

/// Field value at every indexed point. With exclude_self the point's own
/// contribution (score * exp(0)) is dropped and the next neighbor takes its
/// slot, still k contributors when available.
std::vector<double> evaluate_all(const IvfIndex& index,
                                 std::span<const double> scores,
                                 const AdfParams& params,
                                 bool exclude_self = false);

/// Mean Euclidean distance (meters) to the k nearest reference points,
/// exhaustive scan. Throws TooFewPoints when fewer than k references exist.
double knn_density(std::span<const EcefCoord> ref_points,
                   const EcefCoord& query, std::size_t k);

/// Index-accelerated density; when the scanned lists hold fewer than k
/// points the mean runs over what was found.
double knn_density(const IvfIndex& index, const EcefCoord& query,
                   std::size_t k, std::size_t nprobe);

/// knn_density at every indexed point; exclude_self drops the zero-distance
/// self match, which is what a density estimate at a dataset point wants.
std::vector<double> knn_density_all(const IvfIndex& index, std::size_t k,
                                    std::size_t nprobe,
                                    bool exclude_self = true);

}  // namespace adf
