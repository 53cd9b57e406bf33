#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <adf/errors.hpp>
#include <adf/evaluation.hpp>
#include <adf/extract.hpp>
#include <adf/synth.hpp>
#include <adf/trajectory.hpp>

#include <cmath>
#include <string>
#include <unordered_set>
#include <vector>

using namespace adf;

namespace {

SynthSpec small_spec() {
    SynthSpec spec;
    spec.n_flights = 6;
    spec.samples_per_flight = 200;
    spec.n_background = 500;
    spec.seed = 42;
    return spec;
}

std::vector<EcefCoord> record_points(const std::vector<PoiRecord>& records) {
    std::vector<EcefCoord> pts;
    for (const auto& r : records) {
        pts.push_back(geodetic_to_ecef(
            GeodeticCoord::from_degrees(r.lat_deg, r.lon_deg, r.alt_m)));
    }
    return pts;
}

}  // namespace

TEST_CASE("generation is deterministic for a fixed spec") {
    const SynthData a = generate_synthetic(small_spec());
    const SynthData b = generate_synthetic(small_spec());

    REQUIRE(a.flights.size() == b.flights.size());
    for (std::size_t f = 0; f < a.flights.size(); ++f) {
        CHECK(a.flights[f].flight_id == b.flights[f].flight_id);
        REQUIRE(a.flights[f].samples.size() == b.flights[f].samples.size());
        for (std::size_t i = 0; i < a.flights[f].samples.size(); ++i) {
            CHECK(a.flights[f].samples[i].t_s == b.flights[f].samples[i].t_s);
            CHECK(a.flights[f].samples[i].geo.lat_rad ==
                  b.flights[f].samples[i].geo.lat_rad);
            CHECK(a.flights[f].samples[i].geo.lon_rad ==
                  b.flights[f].samples[i].geo.lon_rad);
        }
    }
    REQUIRE(a.points.points.size() == b.points.points.size());
    for (std::size_t i = 0; i < a.points.points.size(); ++i) {
        CHECK(a.points.points[i].x_m == b.points.points[i].x_m);
        CHECK(a.points.scores[i] == b.points.scores[i]);
    }
    REQUIRE(a.truth.size() == b.truth.size());
    for (std::size_t i = 0; i < a.truth.size(); ++i) {
        CHECK(a.truth[i].flight_id == b.truth[i].flight_id);
        CHECK(a.truth[i].point_index == b.truth[i].point_index);
    }

    // A different seed must actually change the data.
    SynthSpec other = small_spec();
    other.seed = 43;
    const SynthData c = generate_synthetic(other);
    CHECK(c.flights[0].samples[10].geo.lat_rad !=
          a.flights[0].samples[10].geo.lat_rad);
}

TEST_CASE("corpus counts and invariants") {
    const SynthSpec spec = small_spec();
    const SynthData data = generate_synthetic(spec);

    CHECK(data.flights.size() == spec.n_flights);
    std::unordered_set<std::string> ids;
    for (const auto& f : data.flights) {
        CHECK(f.samples.size() == spec.samples_per_flight);
        ids.insert(f.flight_id);
        for (std::size_t i = 1; i < f.samples.size(); ++i) {
            CHECK(f.samples[i].t_s > f.samples[i - 1].t_s);
        }
    }
    CHECK(ids.size() == spec.n_flights);  // distinct flight ids

    // Maneuver-event points come first, then the diffuse background.
    const std::size_t n_poi = data.truth.size() * spec.pois_per_event;
    REQUIRE(data.points.points.size() == n_poi + spec.n_background);
    for (std::size_t i = 0; i < n_poi; ++i) {
        CHECK(data.points.scores[i] >= spec.poi_score_min);
        CHECK(data.points.scores[i] <= spec.poi_score_max);
    }
    for (std::size_t i = n_poi; i < data.points.points.size(); ++i) {
        CHECK(data.points.scores[i] >= 0.0);
        CHECK(data.points.scores[i] <= spec.background_score_max);
    }

    // Ground-truth records reference real samples of real flights.
    CHECK(!data.truth.empty());
    for (const auto& t : data.truth) {
        CHECK(ids.count(t.flight_id) == 1);
        CHECK(t.point_index < spec.samples_per_flight);
        CHECK(t.score == 1.0);
    }
}

TEST_CASE("sample spacing follows the commanded speed") {
    const SynthData data = generate_synthetic(small_spec());
    const Trajectory& f = data.flights[0];
    const GeodeticCoord origin = f.samples[0].geo;
    for (std::size_t i = 1; i < f.samples.size(); ++i) {
        const EnuCoord a = ecef_to_enu(geodetic_to_ecef(f.samples[i - 1].geo), origin);
        const EnuCoord b = ecef_to_enu(geodetic_to_ecef(f.samples[i].geo), origin);
        const double de = b.east_m - a.east_m;
        const double dn = b.north_m - a.north_m;
        const double step = std::sqrt(de * de + dn * dn);
        // 150 m/s at 1 Hz; turning steps ride the chord, slightly shorter.
        CHECK(step > 140.0);
        CHECK(step < 160.0);
    }
}

TEST_CASE("maneuver-free flights trip the flat-loss guard") {
    SynthSpec spec = small_spec();
    spec.maneuvers_per_flight = 0;
    const SynthData data = generate_synthetic(spec);
    CHECK(data.truth.empty());
    CHECK(data.points.points.size() == spec.n_background);
    for (const auto& flight : data.flights) {
        CHECK(flight_pois(flight).empty());
    }
}

TEST_CASE("kinematic baseline recovers the planted maneuvers") {
    // Ground truth holds one record per maneuver onset AND exit. The
    // one-step predictor sees the onset as pure novelty (straight history,
    // turned target), so onsets carry the per-flight maximum losses; at the
    // exit the stencils have already absorbed the turn and the spike is
    // several times smaller after min-max normalization. Measured on this
    // corpus: threshold 0.75 flags only the sharpest onsets (P = 1.0,
    // R = 0.361), threshold 0.25 flags every onset plus the strongest exits
    // (P = 1.0, R = 0.556). The bounds below leave margin under those.
    const SynthData data = generate_synthetic(small_spec());
    const std::vector<EcefCoord> truth_pts = record_points(data.truth);

    const auto report_at = [&](double threshold) {
        std::vector<PoiRecord> flagged;
        for (const auto& flight : data.flights) {
            const std::vector<PoiRecord> pois = flight_pois(flight, threshold);
            flagged.insert(flagged.end(), pois.begin(), pois.end());
        }
        REQUIRE(!flagged.empty());
        return spatial_match(truth_pts, record_points(flagged), 200.0);
    };

    const MatchReport strict = report_at(0.75);
    CHECK(strict.precision >= 0.9);  // flags sit at transitions, not on legs
    CHECK(strict.recall >= 0.25);    // at least the sharpest onsets

    const MatchReport relaxed = report_at(0.25);
    CHECK(relaxed.precision >= 0.9);
    CHECK(relaxed.recall >= 0.5);  // every onset = half the truth records
    CHECK(relaxed.recall >= strict.recall);
}

TEST_CASE("adf mask prevalence is about a quarter per flight") {
    const SynthData data = generate_synthetic(small_spec());
    ScoredPointSet set = data.points;
    const IvfIndex index = IvfIndex::train(set.points, 64);
    const AdfParams params{};
    const FieldTrace trace =
        evaluate_trace(data.flights[0], index, set.scores, params);
    std::size_t flags = 0;
    for (bool b : trace.poi_mask) flags += b ? 1 : 0;
    // 200 samples, P75 cut: 50 flags on all-distinct values; value ties can
    // only add flags, and a handful at most.
    CHECK(flags >= 50);
    CHECK(flags <= 60);
}

TEST_CASE("synth spec validation") {
    SynthSpec spec = small_spec();
    spec.samples_per_flight = 0;
    CHECK_THROWS_AS(generate_synthetic(spec), DataError);

    spec = small_spec();
    spec.turn_rate_min_dps = 10.0;  // min above max
    spec.turn_rate_max_dps = 5.0;
    CHECK_THROWS_AS(generate_synthetic(spec), DataError);

    spec = small_spec();
    spec.n_flights = 0;
    CHECK_THROWS_AS(generate_synthetic(spec), DataError);
}
