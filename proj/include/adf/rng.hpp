#pragma once

#include <cstdint>
#include <string_view>

namespace adf {

// All randomness in the toolkit flows from a single 64-bit seed through named
// substreams, so every run is reproducible and modules cannot perturb each
// other's draws. Stream labels in use:
//   "kmeans/init"        centroid initialization
//   "synth/flight/<i>"   per-flight trajectory generation
//   "synth/pois"         POI sampling around maneuvers
//   "synth/background"   background POI cluster
//   "bench/queries"      query workload for latency benchmarks
//   "bench/points"       ad-hoc point clouds for the bench subcommand
// Tests may open ad-hoc "test/..." streams.
//
// The generator is SplitMix64; uniform/normal variates are derived with
// explicit bit arithmetic so output bytes are identical across platforms and
// standard libraries.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::string_view label);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);

    /// Standard normal via Box-Muller (second variate cached).
    double normal();

    /// Uniform index in [0, n). n must be > 0.
    std::uint64_t uniform_index(std::uint64_t n);

private:
    std::uint64_t state_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace adf
