#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adf/geo.hpp"

namespace adf {

/// Curvature below the guard speed is pinned to zero (the kappa formula has
/// a ||v||^3 pole at rest).
inline constexpr double kSpeedGuardMps = 0.1;

/// Floor for the 95th-percentile curvature in the smoothing constant, so a
/// perfectly straight flight still yields finite alpha (and w = 1 at k = 0).
inline constexpr double kCurvatureFloor = 1e-9;

/// Tikhonov term added to the residual covariance.
inline constexpr double kDefaultLambda = 1e-5;

/// Denominator guard in the per-flight min-max score normalization.
inline constexpr double kScoreNormEpsilon = 1e-12;

/// When max(L) - min(L) is at or below this, the flight's losses are treated
/// as flat and every score is zero. Genuine anomalies produce Mahalanobis
/// losses of order 1, while a noiseless straight flight leaves only
/// regularization-scaled numerical dust; without the floor, min-max
/// normalization would stretch that dust across [0,1] and flag arbitrary
/// samples.
inline constexpr double kFlatLossRange = 1e-4;

inline constexpr double kDefaultPoiThreshold = 0.75;

/// First index with two full samples of history; predictions cover
/// [kInteriorBegin, n - 2), i.e. the interior slice of a flight.
inline constexpr std::size_t kInteriorBegin = 2;

struct TrajectorySample {
    double t_s = 0.0;
    GeodeticCoord geo;
    // East/north/up m/s in the flight's local frame, when the feed carries
    // velocity; otherwise velocities are derived from positions.
    std::optional<Eigen::Vector3d> vel_enu;
};

struct Trajectory {
    std::string flight_id;
    std::vector<TrajectorySample> samples;
};

struct KinematicSeries {
    std::vector<double> times_s;
    std::vector<Eigen::Vector3d> positions;      // local Cartesian, meters
    std::vector<Eigen::Vector3d> velocities;     // m/s
    std::vector<Eigen::Vector3d> accelerations;  // m/s^2
    std::vector<double> curvatures;              // 1/m, >= 0

    std::size_t size() const { return positions.size(); }
};

/// One-step-ahead predictions on the interior slice. Element j of each
/// vector belongs to sample index kInteriorBegin + j.
struct PredictionSeries {
    std::vector<Eigen::Vector3d> predicted;
    std::vector<Eigen::Vector3d> residuals;  // predicted - observed
    std::vector<double> weights;             // CA weight w in (0, 1]
    double alpha = 0.0;                      // ln5 / max(kappa95, floor)

    std::size_t interior_count() const { return predicted.size(); }
};

/// Per-interior-sample anomaly losses; scores/mask stay empty until
/// label_pois (or normalize_losses) runs.
struct LossSeries {
    std::vector<double> losses;        // L_i = d_i / t_i
    std::vector<double> distances;     // Mahalanobis d_i
    std::vector<double> time_factors;  // t_i = sqrt(dt_i / mean dt)
    std::vector<double> scores;        // s_i in [0, 1]
    std::vector<bool> poi_mask;
    Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();  // regularized
    double lambda = kDefaultLambda;
};

/// Flagged interior sample in output form: geodetic position plus the
/// flight-relative score.
struct PoiRecord {
    std::string flight_id;
    std::size_t point_index = 0;
    double lon_deg = 0.0;
    double lat_deg = 0.0;
    double alt_m = 0.0;
    double score = 0.0;
};

// --- Cartesian core -------------------------------------------------------
// The pipeline below is frame-agnostic: it sees timestamps and positions in
// any consistent metric frame. The geodetic overloads convert to ENU about
// the first sample and forward here.

/// Velocities via a three-point Lagrange derivative (central in the
/// interior, one-sided at both ends; exact for quadratic paths, valid on
/// non-uniform spacing), accelerations by the same operator on velocities,
/// curvature ||v x a|| / ||v||^3 with the low-speed guard. When `velocities`
/// is non-empty it must match `positions` and is used as-is.
/// Throws TooShort (< 5 samples), NonMonotoneTime, NonFiniteInput.
KinematicSeries derive_kinematics(std::span<const double> times_s,
                                  std::span<const Eigen::Vector3d> positions,
                                  std::span<const Eigen::Vector3d> velocities = {});

/// alpha = ln(5) / max(p95(curvatures), kCurvatureFloor): the CA weight
/// e^(-alpha * kappa) decays to exactly 1/5 at the 95th-percentile curvature.
double smoothing_alpha(std::span<const double> curvatures);

/// For each interior index i: constant-acceleration step from sample i-1,
/// cubic Hermite on [t_{i-2}, t_{i-1}] (positions + velocity tangents at the
/// segment ends) extrapolated to t_i, blended with w_i = e^(-alpha*kappa_i).
/// The spline deliberately never sees sample i — an interpolating segment
/// through the target would predict it exactly and erase the signal.
PredictionSeries predict_blended(const KinematicSeries& kin);

/// Per-flight centered residuals, covariance Sigma = Cov + lambda*I, then
/// L_i = sqrt(r~' Sigma^-1 r~) / sqrt(dt_i / mean dt). Throws TooShort when
/// fewer than 4 interior residuals exist (covariance rank).
LossSeries mahalanobis_loss(const PredictionSeries& pred,
                            std::span<const double> times_s,
                            double lambda = kDefaultLambda);

/// Min-max normalization s = (L - min) / (max - min + eps) with the
/// flat-loss guard (all zeros when the range is at or below kFlatLossRange).
std::vector<double> normalize_losses(std::span<const double> losses);

// --- Geodetic wrappers ------------------------------------------------------

/// ENU positions of every sample about the flight's first sample.
std::vector<Eigen::Vector3d> positions_enu(const Trajectory& traj);

/// Validates and converts the flight, then runs the Cartesian operator.
/// Provided velocities are used only when every sample carries one.
KinematicSeries derive_kinematics(const Trajectory& traj);

/// Fills scores and poi_mask in `loss`, then returns one record per flagged
/// interior sample (mask true iff score >= threshold).
std::vector<PoiRecord> label_pois(LossSeries& loss, const Trajectory& traj,
                                  double threshold = kDefaultPoiThreshold);

/// Whole pipeline for one flight: kinematics, blended prediction,
/// Mahalanobis loss, labeling.
std::vector<PoiRecord> flight_pois(const Trajectory& traj,
                                   double threshold = kDefaultPoiThreshold,
                                   double lambda = kDefaultLambda);

}  // namespace adf
