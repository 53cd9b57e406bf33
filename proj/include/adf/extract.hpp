#pragma once

#include <string>
#include <vector>

#include "adf/field.hpp"
#include "adf/geo.hpp"
#include "adf/ivf_index.hpp"
#include "adf/trajectory.hpp"

namespace adf {

/// A scalar signal sampled along one flight (ADF values or a density
/// baseline) plus the per-trace POI mask. All vectors share one length.
struct FieldTrace {
    std::string flight_id;
    std::vector<double> t_s;
    std::vector<GeodeticCoord> geo;
    std::vector<double> values;
    std::vector<bool> poi_mask;

    std::size_t size() const { return values.size(); }
};

/// Sets trace.poi_mask true exactly where values >= the linear-interpolated
/// percentile of the trace's own values. Relative by construction: a trace
/// in a globally dense region still flags ~the same fraction.
/// Throws TooShort on an empty trace, DataError unless percentile in (0,100).
void relative_threshold(FieldTrace& trace, double percentile);

/// Mask for signals where *smaller* is denser (the KNN distance baseline):
/// flags values <= the percentile.
void relative_threshold_below(FieldTrace& trace, double percentile);

/// Field value at every sample of the flight, evaluated in ECEF through the
/// index, geodetic coordinates re-attached; mask filled at `percentile`.
/// Throws TooShort on a flight without samples.
FieldTrace evaluate_trace(const Trajectory& traj, const IvfIndex& index,
                          std::span<const double> scores,
                          const AdfParams& params, double percentile = 75.0);

/// Oracle path: identical trace computed with exhaustive k-NN.
FieldTrace evaluate_trace_brute(const Trajectory& traj,
                                std::span<const EcefCoord> points,
                                std::span<const double> scores,
                                const AdfParams& params,
                                double percentile = 75.0);

/// KNN mean-distance baseline along the flight; small value = dense, so the
/// mask flags values at or below the percentile.
FieldTrace knn_density_trace(const Trajectory& traj, const IvfIndex& index,
                             std::size_t k, std::size_t nprobe,
                             double percentile = 75.0);

/// Per-flight traces, parallel across flights; output order matches input.
std::vector<FieldTrace> evaluate_traces(const std::vector<Trajectory>& trajs,
                                        const IvfIndex& index,
                                        std::span<const double> scores,
                                        const AdfParams& params,
                                        double percentile = 75.0);

/// ECEF positions of the flagged samples of one trace.
std::vector<EcefCoord> flagged_points(const FieldTrace& trace);

}  // namespace adf
