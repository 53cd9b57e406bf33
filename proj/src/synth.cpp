#include "adf/synth.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "adf/errors.hpp"
#include "adf/rng.hpp"

namespace adf {
namespace {

constexpr double kPi = 3.14159265358979323846;

struct Maneuver {
    std::size_t onset = 0;  // first sample with nonzero turn rate
    std::size_t exit = 0;   // first sample after the turn rate returns to 0
    double rate_rad_s = 0.0;
};

std::string flight_name(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "F%04zu", i);
    return buf;
}

void check_spec(const SynthSpec& spec) {
    if (spec.n_flights == 0) throw DataError("n_flights must be positive");
    if (spec.samples_per_flight < 5) {
        throw DataError("samples_per_flight must be at least 5");
    }
    if (!(spec.dt_s > 0.0) || !(spec.speed_mps > 0.0)) {
        throw DataError("dt and speed must be positive");
    }
    if (spec.turn_len_min == 0 || spec.turn_len_max < spec.turn_len_min ||
        spec.holding_len_max < spec.holding_len_min) {
        throw DataError("maneuver length bounds are inverted");
    }
    if (!(spec.turn_rate_min_dps > 0.0) ||
        spec.turn_rate_max_dps < spec.turn_rate_min_dps) {
        throw DataError("turn rate range is invalid");
    }
    if (spec.poi_score_max < spec.poi_score_min || spec.poi_score_min < 0.0) {
        throw DataError("POI score range is invalid");
    }
}

// Plans non-overlapping maneuver windows around evenly spaced centers,
// keeping clear of the flight's ends. Windows that cannot fit are dropped.
std::vector<Maneuver> plan_maneuvers(const SynthSpec& spec, RngStream& rng) {
    const std::size_t n = spec.samples_per_flight;
    std::vector<Maneuver> plan;
    std::size_t prev_exit = 8;  // keep the warm-up samples maneuver-free
    for (std::size_t j = 0; j < spec.maneuvers_per_flight; ++j) {
        const bool hold = rng.uniform() < spec.holding_fraction;
        const std::size_t len_min = hold ? spec.holding_len_min : spec.turn_len_min;
        const std::size_t len_max = hold ? spec.holding_len_max : spec.turn_len_max;
        const std::size_t len = len_min + rng.uniform_index(len_max - len_min + 1);
        const double rate_dps =
            rng.uniform(spec.turn_rate_min_dps, spec.turn_rate_max_dps) *
            (rng.uniform() < 0.5 ? -1.0 : 1.0);
        const std::size_t center =
            (j + 1) * n / (spec.maneuvers_per_flight + 1);
        const std::size_t jitter = rng.uniform_index(11);  // 0..10 -> -5..5

        std::size_t onset = center > len / 2 ? center - len / 2 : 0;
        onset = onset + jitter;
        onset = onset > 5 ? onset - 5 : 0;
        if (onset < prev_exit + 6) onset = prev_exit + 6;
        const std::size_t exit = onset + len;
        if (exit + 9 > n) continue;  // does not fit; drop this maneuver
        plan.push_back({onset, exit, rate_dps * kPi / 180.0});
        prev_exit = exit;
    }
    return plan;
}

}  // namespace

SynthData generate_synthetic(const SynthSpec& spec) {
    check_spec(spec);
    const GeodeticCoord origin =
        GeodeticCoord::from_degrees(spec.origin_lat_deg, spec.origin_lon_deg, 0.0);
    const std::size_t n = spec.samples_per_flight;

    SynthData data;
    data.flights.reserve(spec.n_flights);
    std::vector<std::vector<EnuCoord>> event_sites;  // clean ENU per truth event

    for (std::size_t fi = 0; fi < spec.n_flights; ++fi) {
        RngStream rng(spec.seed, "synth/flight/" + std::to_string(fi));
        const double alt = rng.uniform(9000.0, 12000.0);
        double east = rng.uniform(-spec.region_half_m, spec.region_half_m);
        double north = rng.uniform(-spec.region_half_m, spec.region_half_m);
        double heading = rng.uniform(0.0, 2.0 * kPi);
        const std::vector<Maneuver> plan = plan_maneuvers(spec, rng);

        std::vector<double> omega(n, 0.0);
        for (const auto& m : plan) {
            for (std::size_t s = m.onset; s < m.exit; ++s) omega[s] = m.rate_rad_s;
        }

        Trajectory traj;
        traj.flight_id = flight_name(fi);
        traj.samples.reserve(n);
        std::vector<EnuCoord> clean(n);
        for (std::size_t s = 0; s < n; ++s) {
            clean[s] = {east, north, alt};
            EnuCoord enu = clean[s];
            if (spec.noise_m > 0.0) {
                enu.east_m += spec.noise_m * rng.normal();
                enu.north_m += spec.noise_m * rng.normal();
                enu.up_m += spec.noise_m * rng.normal();
            }
            TrajectorySample sample;
            sample.t_s = static_cast<double>(s) * spec.dt_s;
            sample.geo = ecef_to_geodetic(enu_to_ecef(enu, origin));
            traj.samples.push_back(std::move(sample));

            heading += omega[s] * spec.dt_s;
            east += spec.speed_mps * spec.dt_s * std::sin(heading);
            north += spec.speed_mps * spec.dt_s * std::cos(heading);
        }

        for (const auto& m : plan) {
            for (const std::size_t event : {m.onset, m.exit}) {
                const GeodeticCoord g =
                    ecef_to_geodetic(enu_to_ecef(clean[event], origin));
                data.truth.push_back({traj.flight_id, event, g.lon_deg(),
                                      g.lat_deg(), g.height_m, 1.0});
                if (event_sites.size() <= fi) event_sites.resize(fi + 1);
                event_sites[fi].push_back(clean[event]);
            }
        }
        data.flights.push_back(std::move(traj));
    }

    RngStream poi_rng(spec.seed, "synth/pois");
    for (const auto& sites : event_sites) {
        for (const auto& site : sites) {
            for (std::size_t p = 0; p < spec.pois_per_event; ++p) {
                const EnuCoord jittered{
                    site.east_m + spec.poi_jitter_m * poi_rng.normal(),
                    site.north_m + spec.poi_jitter_m * poi_rng.normal(),
                    site.up_m + spec.poi_jitter_m * poi_rng.normal()};
                data.points.points.push_back(enu_to_ecef(jittered, origin));
                data.points.scores.push_back(
                    poi_rng.uniform(spec.poi_score_min, spec.poi_score_max));
            }
        }
    }

    RngStream bg_rng(spec.seed, "synth/background");
    const double spread = 1.2 * spec.region_half_m;
    for (std::size_t p = 0; p < spec.n_background; ++p) {
        const EnuCoord enu{bg_rng.uniform(-spread, spread),
                           bg_rng.uniform(-spread, spread),
                           bg_rng.uniform(8500.0, 12500.0)};
        data.points.points.push_back(enu_to_ecef(enu, origin));
        data.points.scores.push_back(
            bg_rng.uniform(0.0, spec.background_score_max));
    }
    return data;
}

}  // namespace adf
