#include "adf/extract.hpp"

#include <cmath>
#include <string>

#include "adf/errors.hpp"
#include "adf/stats.hpp"

namespace adf {
namespace {

void check_percentile(double percentile) {
    if (!std::isfinite(percentile) || percentile <= 0.0 || percentile >= 100.0) {
        throw DataError("percentile must lie strictly between 0 and 100");
    }
}

FieldTrace trace_skeleton(const Trajectory& traj) {
    if (traj.samples.empty()) {
        throw TooShort("flight " + traj.flight_id + " has no samples");
    }
    FieldTrace trace;
    trace.flight_id = traj.flight_id;
    trace.t_s.reserve(traj.samples.size());
    trace.geo.reserve(traj.samples.size());
    for (const auto& s : traj.samples) {
        trace.t_s.push_back(s.t_s);
        trace.geo.push_back(s.geo);
    }
    return trace;
}

std::vector<EcefCoord> sample_ecef(const Trajectory& traj) {
    std::vector<EcefCoord> out;
    out.reserve(traj.samples.size());
    for (const auto& s : traj.samples) out.push_back(geodetic_to_ecef(s.geo));
    return out;
}

}  // namespace

void relative_threshold(FieldTrace& trace, double percentile) {
    check_percentile(percentile);
    if (trace.values.empty()) throw TooShort("trace has no values");
    const double cut = adf::percentile(trace.values, percentile);
    trace.poi_mask.resize(trace.values.size());
    for (std::size_t i = 0; i < trace.values.size(); ++i) {
        trace.poi_mask[i] = trace.values[i] >= cut;
    }
}

void relative_threshold_below(FieldTrace& trace, double percentile) {
    check_percentile(percentile);
    if (trace.values.empty()) throw TooShort("trace has no values");
    const double cut = adf::percentile(trace.values, percentile);
    trace.poi_mask.resize(trace.values.size());
    for (std::size_t i = 0; i < trace.values.size(); ++i) {
        trace.poi_mask[i] = trace.values[i] <= cut;
    }
}

FieldTrace evaluate_trace(const Trajectory& traj, const IvfIndex& index,
                          std::span<const double> scores,
                          const AdfParams& params, double percentile) {
    check_percentile(percentile);
    FieldTrace trace = trace_skeleton(traj);
    const std::vector<EcefCoord> queries = sample_ecef(traj);
    trace.values = evaluate_many(index, scores, queries, params);
    relative_threshold(trace, percentile);
    return trace;
}

FieldTrace evaluate_trace_brute(const Trajectory& traj,
                                std::span<const EcefCoord> points,
                                std::span<const double> scores,
                                const AdfParams& params, double percentile) {
    check_percentile(percentile);
    FieldTrace trace = trace_skeleton(traj);
    const std::vector<EcefCoord> queries = sample_ecef(traj);
    trace.values.reserve(queries.size());
    for (const auto& q : queries) {
        trace.values.push_back(evaluate_brute(points, scores, q, params));
    }
    relative_threshold(trace, percentile);
    return trace;
}

FieldTrace knn_density_trace(const Trajectory& traj, const IvfIndex& index,
                             std::size_t k, std::size_t nprobe,
                             double percentile) {
    check_percentile(percentile);
    FieldTrace trace = trace_skeleton(traj);
    trace.values.reserve(traj.samples.size());
    for (const auto& q : sample_ecef(traj)) {
        trace.values.push_back(knn_density(index, q, k, nprobe));
    }
    relative_threshold_below(trace, percentile);
    return trace;
}

std::vector<FieldTrace> evaluate_traces(const std::vector<Trajectory>& trajs,
                                        const IvfIndex& index,
                                        std::span<const double> scores,
                                        const AdfParams& params,
                                        double percentile) {
    // evaluate_trace is parallel over the samples of one flight already;
    // keeping the flight loop serial avoids nested parallel regions while
    // per-trace masks stay independent of batch composition by construction.
    std::vector<FieldTrace> out;
    out.reserve(trajs.size());
    for (const auto& traj : trajs) {
        out.push_back(evaluate_trace(traj, index, scores, params, percentile));
    }
    return out;
}

std::vector<EcefCoord> flagged_points(const FieldTrace& trace) {
    std::vector<EcefCoord> out;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (!trace.poi_mask.empty() && trace.poi_mask[i]) {
            out.push_back(geodetic_to_ecef(trace.geo[i]));
        }
    }
    return out;
}

}  // namespace adf
