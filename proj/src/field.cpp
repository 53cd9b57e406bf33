#include "adf/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adf/errors.hpp"
#include "adf/stats.hpp"

namespace adf {
namespace {

void check_params(const AdfParams& p) {
    if (!std::isfinite(p.sigma0_m) || p.sigma0_m <= 0.0) {
        throw DataError("sigma0 must be a positive, finite length");
    }
    if (p.k == 0) throw DataError("field evaluation needs k >= 1");
}

// Neighbors arrive sorted by ascending distance; Neumaier compensation makes
// the result insensitive to the magnitude spread across contributors.
double accumulate_field(const NeighborSet& nn, std::span<const double> scores,
                        const AdfParams& params) {
    NeumaierSum sum;
    for (std::size_t j = 0; j < nn.size(); ++j) {
        const double s = scores[nn.indices[j]];
        const double sigma = params.bandwidth == BandwidthMode::kFixed
                                 ? params.sigma0_m
                                 : adaptive_bandwidth(params.sigma0_m, s);
        sum.add(kernel_contribution(s, nn.sq_dists[j], sigma));
    }
    return sum.value();
}

// Drops the entry matching `self`, then truncates back to k. The self match
// is usually the zero-distance head of the list, but exact-duplicate points
// can push it deeper, so scan rather than assume.
void drop_self(NeighborSet& nn, std::size_t self, std::size_t k) {
    for (std::size_t j = 0; j < nn.size(); ++j) {
        if (nn.indices[j] == self) {
            nn.indices.erase(nn.indices.begin() + static_cast<std::ptrdiff_t>(j));
            nn.sq_dists.erase(nn.sq_dists.begin() + static_cast<std::ptrdiff_t>(j));
            break;
        }
    }
    if (nn.size() > k) {
        nn.indices.resize(k);
        nn.sq_dists.resize(k);
    }
}

}  // namespace

void validate_scores(std::span<const double> scores, std::size_t n_points) {
    if (scores.size() != n_points) {
        throw DataError("have " + std::to_string(scores.size()) + " scores for " +
                        std::to_string(n_points) + " points");
    }
    for (const double s : scores) {
        if (!std::isfinite(s)) throw NonFiniteInput("score is not finite");
        if (s < 0.0) throw DataError("scores must be non-negative");
    }
}

double adaptive_bandwidth(double sigma0_m, double score) {
    return sigma0_m / (score + kScoreEpsilon);
}

double gaussian_kernel(double sq_dist_m2, double sigma_m) {
    return std::exp(-0.5 * sq_dist_m2 / (sigma_m * sigma_m));
}

double kernel_contribution(double score, double sq_dist_m2, double sigma_m) {
    const double c = score * gaussian_kernel(sq_dist_m2, sigma_m);
    return c < kContributionFloor ? 0.0 : c;
}

double evaluate(const IvfIndex& index, std::span<const double> scores,
                const EcefCoord& query, const AdfParams& params) {
    check_params(params);
    if (scores.size() != index.size()) {
        throw DataError("score count does not match the index");
    }
    const NeighborSet nn = index.search(query, {params.k, params.nprobe});
    return accumulate_field(nn, scores, params);
}

double evaluate_brute(std::span<const EcefCoord> points,
                      std::span<const double> scores, const EcefCoord& query,
                      const AdfParams& params) {
    check_params(params);
    if (scores.size() != points.size()) {
        throw DataError("score count does not match the point set");
    }
    const NeighborSet nn = brute_force_search(points, query, params.k);
    return accumulate_field(nn, scores, params);
}

std::vector<double> evaluate_many(const IvfIndex& index,
                                  std::span<const double> scores,
                                  std::span<const EcefCoord> queries,
                                  const AdfParams& params) {
    check_params(params);
    validate_scores(scores, index.size());
    // Everything that can throw is checked here; an exception escaping an
    // OpenMP loop body would terminate the process.
    if (index.size() == 0) throw EmptyIndex("index holds no points");
    for (const auto& q : queries) {
        if (!(std::isfinite(q.x_m) && std::isfinite(q.y_m) && std::isfinite(q.z_m))) {
            throw NonFiniteInput("query has a non-finite coordinate");
        }
    }
    std::vector<double> out(queries.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(queries.size()); ++i) {
        out[i] = evaluate(index, scores, queries[i], params);
    }
    return out;
}

std::vector<double> evaluate_all(const IvfIndex& index,
                                 std::span<const double> scores,
                                 const AdfParams& params, bool exclude_self) {
    check_params(params);
    validate_scores(scores, index.size());
    if (index.size() == 0) throw EmptyIndex("index holds no points");
    const auto pts = index.points();
    const SearchParams sp{exclude_self ? params.k + 1 : params.k, params.nprobe};
    std::vector<double> out(pts.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(pts.size()); ++i) {
        NeighborSet nn = index.search(pts[i], sp);
        if (exclude_self) drop_self(nn, static_cast<std::size_t>(i), params.k);
        out[i] = accumulate_field(nn, scores, params);
    }
    return out;
}

double knn_density(std::span<const EcefCoord> ref_points,
                   const EcefCoord& query, std::size_t k) {
    if (k == 0) throw DataError("density estimate needs k >= 1");
    if (ref_points.size() < k) {
        throw TooFewPoints("density estimate needs " + std::to_string(k) +
                           " reference points, got " +
                           std::to_string(ref_points.size()));
    }
    const NeighborSet nn = brute_force_search(ref_points, query, k);
    NeumaierSum sum;
    for (const double d2 : nn.sq_dists) sum.add(std::sqrt(d2));
    return sum.value() / static_cast<double>(nn.size());
}

double knn_density(const IvfIndex& index, const EcefCoord& query,
                   std::size_t k, std::size_t nprobe) {
    if (k == 0) throw DataError("density estimate needs k >= 1");
    const NeighborSet nn = index.search(query, {k, nprobe});
    NeumaierSum sum;
    for (const double d2 : nn.sq_dists) sum.add(std::sqrt(d2));
    return sum.value() / static_cast<double>(nn.size());
}

std::vector<double> knn_density_all(const IvfIndex& index, std::size_t k,
                                    std::size_t nprobe, bool exclude_self) {
    if (k == 0) throw DataError("density estimate needs k >= 1");
    if (index.size() == 0) throw EmptyIndex("index holds no points");
    if (exclude_self && index.size() < 2) {
        throw TooFewPoints("self-excluded density needs at least two points");
    }
    const auto pts = index.points();
    const SearchParams sp{exclude_self ? k + 1 : k, nprobe};
    std::vector<double> out(pts.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(pts.size()); ++i) {
        NeighborSet nn = index.search(pts[i], sp);
        if (exclude_self) drop_self(nn, static_cast<std::size_t>(i), k);
        NeumaierSum sum;
        for (const double d2 : nn.sq_dists) sum.add(std::sqrt(d2));
        out[i] = sum.value() / static_cast<double>(nn.size());
    }
    return out;
}

}  // namespace adf
