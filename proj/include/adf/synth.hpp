#pragma once

#include <cstdint>
#include <vector>

#include "adf/field.hpp"
#include "adf/trajectory.hpp"

namespace adf {

/// Desk-scale synthetic stand-in for a flight dataset: cruise legs broken by
/// planned maneuvers (turns and holding arcs) at known sample indices, a
/// scored point cloud concentrated around the maneuvers, and a diffuse
/// low-score background. Every field has a working default; only seed and the
/// count knobs usually change.
struct SynthSpec {
    std::size_t n_flights = 20;
    std::size_t samples_per_flight = 300;
    double dt_s = 1.0;
    double speed_mps = 150.0;
    double noise_m = 0.0;  // per-axis Gaussian jitter on sample positions

    std::size_t maneuvers_per_flight = 3;
    double turn_rate_min_dps = 3.0;
    double turn_rate_max_dps = 6.0;
    std::size_t turn_len_min = 10;  // samples per regular turn
    std::size_t turn_len_max = 30;
    double holding_fraction = 0.25;    // share of maneuvers that are holds
    std::size_t holding_len_min = 45;  // samples per holding arc
    std::size_t holding_len_max = 60;

    std::size_t pois_per_event = 5;  // scored points per maneuver onset/exit
    double poi_jitter_m = 100.0;
    double poi_score_min = 0.5;
    double poi_score_max = 1.0;
    std::size_t n_background = 2000;
    double background_score_max = 0.3;

    double region_half_m = 150000.0;  // flights start within +/- this square
    double origin_lat_deg = 39.0;
    double origin_lon_deg = -98.0;
    std::uint64_t seed = 0;
};

struct SynthData {
    std::vector<Trajectory> flights;
    ScoredPointSet points;  // maneuver-clustered POIs first, then background
    // Ground truth: one record per maneuver onset and exit (the samples
    // where the turn rate jumps), score pinned to 1.
    std::vector<PoiRecord> truth;
};

/// Deterministic for a fixed spec: per-flight streams "synth/flight/<i>",
/// point streams "synth/pois" and "synth/background".
SynthData generate_synthetic(const SynthSpec& spec);

}  // namespace adf
