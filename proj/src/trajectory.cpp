#include "adf/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adf/errors.hpp"
#include "adf/stats.hpp"

namespace adf {
namespace {

void check_series(std::span<const double> times_s,
                  std::span<const Eigen::Vector3d> positions) {
    if (positions.size() != times_s.size()) {
        throw DataError("timestamp and position counts differ");
    }
    if (positions.size() < 5) {
        throw TooShort("prediction pipeline needs at least 5 samples, got " +
                       std::to_string(positions.size()));
    }
    for (std::size_t i = 0; i < times_s.size(); ++i) {
        if (!std::isfinite(times_s[i]) || !positions[i].allFinite()) {
            throw NonFiniteInput("trajectory sample " + std::to_string(i) +
                                 " is not finite");
        }
        if (i > 0 && times_s[i] <= times_s[i - 1]) {
            throw NonMonotoneTime("timestamps must be strictly increasing (sample " +
                                  std::to_string(i) + ")");
        }
    }
}

// Derivative at t_eval of the quadratic through (t0,f0), (t1,f1), (t2,f2).
// Exact for quadratic paths on any spacing; reduces to the classic central /
// one-sided difference stencils when the spacing is uniform.
Eigen::Vector3d lagrange3_derivative(double t0, const Eigen::Vector3d& f0,
                                     double t1, const Eigen::Vector3d& f1,
                                     double t2, const Eigen::Vector3d& f2,
                                     double t_eval) {
    const double c0 = (2.0 * t_eval - t1 - t2) / ((t0 - t1) * (t0 - t2));
    const double c1 = (2.0 * t_eval - t0 - t2) / ((t1 - t0) * (t1 - t2));
    const double c2 = (2.0 * t_eval - t0 - t1) / ((t2 - t0) * (t2 - t1));
    return c0 * f0 + c1 * f1 + c2 * f2;
}

std::vector<Eigen::Vector3d> differentiate(std::span<const double> t,
                                           std::span<const Eigen::Vector3d> f) {
    const std::size_t n = f.size();
    std::vector<Eigen::Vector3d> df(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t w = i == 0 ? 0 : (i == n - 1 ? n - 3 : i - 1);
        df[i] = lagrange3_derivative(t[w], f[w], t[w + 1], f[w + 1], t[w + 2],
                                     f[w + 2], t[i]);
    }
    return df;
}

// Cubic Hermite segment on [ta, tb] with endpoint positions and velocity
// tangents, evaluated at t (u > 1 means extrapolation past the segment).
Eigen::Vector3d hermite_eval(double ta, const Eigen::Vector3d& pa,
                             const Eigen::Vector3d& va, double tb,
                             const Eigen::Vector3d& pb,
                             const Eigen::Vector3d& vb, double t) {
    const double h = tb - ta;
    const double u = (t - ta) / h;
    const double u2 = u * u;
    const double u3 = u2 * u;
    const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    const double h10 = u3 - 2.0 * u2 + u;
    const double h01 = -2.0 * u3 + 3.0 * u2;
    const double h11 = u3 - u2;
    return h00 * pa + h10 * h * va + h01 * pb + h11 * h * vb;
}

}  // namespace

KinematicSeries derive_kinematics(std::span<const double> times_s,
                                  std::span<const Eigen::Vector3d> positions,
                                  std::span<const Eigen::Vector3d> velocities) {
    check_series(times_s, positions);
    if (!velocities.empty() && velocities.size() != positions.size()) {
        throw DataError("provided velocities do not match the sample count");
    }

    KinematicSeries kin;
    kin.times_s.assign(times_s.begin(), times_s.end());
    kin.positions.assign(positions.begin(), positions.end());
    if (velocities.empty()) {
        kin.velocities = differentiate(times_s, positions);
    } else {
        for (const auto& v : velocities) {
            if (!v.allFinite()) throw NonFiniteInput("provided velocity is not finite");
        }
        kin.velocities.assign(velocities.begin(), velocities.end());
    }
    kin.accelerations = differentiate(times_s, kin.velocities);

    kin.curvatures.resize(kin.size());
    for (std::size_t i = 0; i < kin.size(); ++i) {
        const double speed = kin.velocities[i].norm();
        kin.curvatures[i] =
            speed < kSpeedGuardMps
                ? 0.0
                : kin.velocities[i].cross(kin.accelerations[i]).norm() /
                      (speed * speed * speed);
    }
    return kin;
}

double smoothing_alpha(std::span<const double> curvatures) {
    const double k95 = percentile(curvatures, 95.0);
    return std::log(5.0) / std::max(k95, kCurvatureFloor);
}

PredictionSeries predict_blended(const KinematicSeries& kin) {
    const std::size_t n = kin.size();
    if (n < 5) {
        throw TooShort("prediction pipeline needs at least 5 samples, got " +
                       std::to_string(n));
    }

    PredictionSeries pred;
    pred.alpha = smoothing_alpha(kin.curvatures);
    const std::size_t interior_end = n - 2;  // exclusive
    pred.predicted.reserve(interior_end - kInteriorBegin);
    pred.residuals.reserve(interior_end - kInteriorBegin);
    pred.weights.reserve(interior_end - kInteriorBegin);

    for (std::size_t i = kInteriorBegin; i < interior_end; ++i) {
        const double dt = kin.times_s[i] - kin.times_s[i - 1];
        const Eigen::Vector3d p_ca = kin.positions[i - 1] +
                                     dt * kin.velocities[i - 1] +
                                     0.5 * dt * dt * kin.accelerations[i - 1];
        const Eigen::Vector3d p_spline = hermite_eval(
            kin.times_s[i - 2], kin.positions[i - 2], kin.velocities[i - 2],
            kin.times_s[i - 1], kin.positions[i - 1], kin.velocities[i - 1],
            kin.times_s[i]);
        const double w = std::exp(-pred.alpha * kin.curvatures[i]);
        const Eigen::Vector3d p_hat = w * p_ca + (1.0 - w) * p_spline;
        pred.predicted.push_back(p_hat);
        pred.residuals.push_back(p_hat - kin.positions[i]);
        pred.weights.push_back(w);
    }
    return pred;
}

LossSeries mahalanobis_loss(const PredictionSeries& pred,
                            std::span<const double> times_s, double lambda) {
    const std::size_t m = pred.interior_count();
    if (m < 4) {
        throw TooShort("covariance needs at least 4 interior residuals, got " +
                       std::to_string(m));
    }
    if (times_s.size() != m + 4) {
        throw DataError("timestamp count does not match the prediction series");
    }
    if (!std::isfinite(lambda) || lambda <= 0.0) {
        throw DataError("lambda must be a positive, finite scalar");
    }

    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const auto& r : pred.residuals) mean += r;
    mean /= static_cast<double>(m);

    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& r : pred.residuals) {
        const Eigen::Vector3d c = r - mean;
        cov += c * c.transpose();
    }
    cov /= static_cast<double>(m - 1);

    LossSeries loss;
    loss.lambda = lambda;
    loss.covariance = cov + lambda * Eigen::Matrix3d::Identity();
    const Eigen::LLT<Eigen::Matrix3d> llt(loss.covariance);
    if (llt.info() != Eigen::Success) {
        throw InternalError("regularized covariance failed to factorize");
    }

    double dt_sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t i = kInteriorBegin + j;
        dt_sum += times_s[i] - times_s[i - 1];
    }
    const double dt_mean = dt_sum / static_cast<double>(m);

    loss.distances.resize(m);
    loss.time_factors.resize(m);
    loss.losses.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        const Eigen::Vector3d c = pred.residuals[j] - mean;
        loss.distances[j] = std::sqrt(c.dot(llt.solve(c)));
        const std::size_t i = kInteriorBegin + j;
        loss.time_factors[j] = std::sqrt((times_s[i] - times_s[i - 1]) / dt_mean);
        loss.losses[j] = loss.distances[j] / loss.time_factors[j];
    }
    return loss;
}

std::vector<double> normalize_losses(std::span<const double> losses) {
    if (losses.empty()) throw TooShort("cannot normalize an empty loss series");
    const auto [lo_it, hi_it] = std::minmax_element(losses.begin(), losses.end());
    const double lo = *lo_it;
    const double range = *hi_it - lo;
    std::vector<double> scores(losses.size(), 0.0);
    if (range <= kFlatLossRange) return scores;  // flat flight: nothing stands out
    for (std::size_t i = 0; i < losses.size(); ++i) {
        scores[i] = (losses[i] - lo) / (range + kScoreNormEpsilon);
    }
    return scores;
}

std::vector<Eigen::Vector3d> positions_enu(const Trajectory& traj) {
    if (traj.samples.empty()) throw TooShort("flight has no samples");
    const GeodeticCoord& origin = traj.samples.front().geo;
    std::vector<Eigen::Vector3d> out;
    out.reserve(traj.samples.size());
    for (const auto& s : traj.samples) {
        const EnuCoord e = ecef_to_enu(geodetic_to_ecef(s.geo), origin);
        out.emplace_back(e.east_m, e.north_m, e.up_m);
    }
    return out;
}

KinematicSeries derive_kinematics(const Trajectory& traj) {
    std::vector<double> times;
    times.reserve(traj.samples.size());
    for (const auto& s : traj.samples) times.push_back(s.t_s);
    const std::vector<Eigen::Vector3d> pos = positions_enu(traj);

    // Feed velocities only when the whole flight carries them; a mixed feed
    // would make the acceleration derivative compare measured against
    // derived values sample-to-sample.
    bool all_vel = !traj.samples.empty();
    for (const auto& s : traj.samples) all_vel = all_vel && s.vel_enu.has_value();
    std::vector<Eigen::Vector3d> vel;
    if (all_vel) {
        vel.reserve(traj.samples.size());
        for (const auto& s : traj.samples) vel.push_back(*s.vel_enu);
    }
    return derive_kinematics(times, pos, vel);
}

std::vector<PoiRecord> label_pois(LossSeries& loss, const Trajectory& traj,
                                  double threshold) {
    if (loss.losses.empty()) throw TooShort("loss series is empty");
    if (traj.samples.size() != loss.losses.size() + 4) {
        throw DataError("flight length does not match the loss series");
    }
    loss.scores = normalize_losses(loss.losses);
    loss.poi_mask.assign(loss.scores.size(), false);

    std::vector<PoiRecord> records;
    for (std::size_t j = 0; j < loss.scores.size(); ++j) {
        if (loss.scores[j] < threshold) continue;
        loss.poi_mask[j] = true;
        const std::size_t i = kInteriorBegin + j;
        const auto& s = traj.samples[i];
        records.push_back({traj.flight_id, i, s.geo.lon_deg(), s.geo.lat_deg(),
                           s.geo.height_m, loss.scores[j]});
    }
    return records;
}

std::vector<PoiRecord> flight_pois(const Trajectory& traj, double threshold,
                                   double lambda) {
    const KinematicSeries kin = derive_kinematics(traj);
    const PredictionSeries pred = predict_blended(kin);
    std::vector<double> times;
    times.reserve(traj.samples.size());
    for (const auto& s : traj.samples) times.push_back(s.t_s);
    LossSeries loss = mahalanobis_loss(pred, times, lambda);
    return label_pois(loss, traj, threshold);
}

}  // namespace adf
