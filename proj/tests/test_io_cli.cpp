#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <adf/errors.hpp>
#include <adf/io.hpp>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace adf;
namespace fs = std::filesystem;

namespace {

fs::path g_bin_dir;  // directory holding this test binary and the CLI

fs::path cli_path() { return g_bin_dir / "adf"; }

struct CliResult {
    int exit_code = -1;
    std::string out;
};

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

CliResult run_cli(const std::string& args) {
    const fs::path out_file = fs::temp_directory_path() / "adf_cli_out.txt";
    const std::string cmd =
        cli_path().string() + " " + args + " > " + out_file.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_file);
    fs::remove(out_file);
    return r;
}

fs::path temp_file(const char* stem) {
    return fs::temp_directory_path() / stem;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary);
    os << text;
}

Trajectory sample_flight(const std::string& id, double lon0, bool with_velocity) {
    Trajectory traj;
    traj.flight_id = id;
    for (std::size_t i = 0; i < 6; ++i) {
        TrajectorySample s;
        s.t_s = 10.0 * static_cast<double>(i) + 0.125;
        s.geo = GeodeticCoord::from_degrees(39.0 + 0.001 * static_cast<double>(i),
                                            lon0 + 0.002 * static_cast<double>(i),
                                            9000.0 + static_cast<double>(i));
        if (with_velocity) {
            s.vel_enu = Eigen::Vector3d(120.5, -3.25, 0.75 * static_cast<double>(i));
        }
        traj.samples.push_back(s);
    }
    return traj;
}

}  // namespace

TEST_CASE("trajectory JSONL round trip") {
    const fs::path path = temp_file("adf_io_flights.jsonl");
    const std::vector<Trajectory> flights = {sample_flight("AA12", -98.0, false),
                                             sample_flight("BB7", -97.5, true)};
    write_trajectories(path, flights);

    IngestStats stats;
    const std::vector<Trajectory> back = ingest_trajectories(path, &stats);
    CHECK(stats.flights_kept == 2);
    CHECK(stats.flights_skipped == 0);
    CHECK(stats.warnings.empty());
    REQUIRE(back.size() == 2);
    for (std::size_t f = 0; f < 2; ++f) {
        CHECK(back[f].flight_id == flights[f].flight_id);
        REQUIRE(back[f].samples.size() == flights[f].samples.size());
        // t, altitude, and velocity are stored in their native units and must
        // survive bitwise (%.17g). The file stores lat/lon in degrees, so the
        // radian fields cross one deg->rad->deg conversion pair, which costs
        // at most one rounding in each direction: allow a couple of ulp.
        const auto close_rad = [](double a, double b) {
            return std::abs(a - b) <= 4e-16 * std::max(std::abs(a), std::abs(b));
        };
        for (std::size_t i = 0; i < back[f].samples.size(); ++i) {
            const auto& got = back[f].samples[i];
            const auto& want = flights[f].samples[i];
            CHECK(got.t_s == want.t_s);
            CHECK(close_rad(got.geo.lat_rad, want.geo.lat_rad));
            CHECK(close_rad(got.geo.lon_rad, want.geo.lon_rad));
            CHECK(got.geo.height_m == want.geo.height_m);
            REQUIRE(got.vel_enu.has_value() == want.vel_enu.has_value());
            if (want.vel_enu) CHECK(*got.vel_enu == *want.vel_enu);
        }
    }
    fs::remove(path);
}

TEST_CASE("rows group by flight in first-appearance order") {
    const fs::path path = temp_file("adf_io_interleaved.jsonl");
    write_text(path,
               R"({"flight_id":"B","t":0,"lon":-98.0,"lat":39.0,"alt":9000})" "\n"
               R"({"flight_id":"A","t":0,"lon":-97.0,"lat":38.0,"alt":8000})" "\n"
               R"({"flight_id":"B","t":1,"lon":-98.0,"lat":39.1,"alt":9000})" "\n"
               R"({"flight_id":"A","t":2,"lon":-97.0,"lat":38.1,"alt":8000})" "\n");
    const std::vector<Trajectory> flights = ingest_trajectories(path);
    REQUIRE(flights.size() == 2);
    CHECK(flights[0].flight_id == "B");
    CHECK(flights[1].flight_id == "A");
    CHECK(flights[0].samples.size() == 2);
    CHECK(flights[1].samples[1].t_s == 2.0);
    fs::remove(path);
}

TEST_CASE("invalid flights are skipped with a warning") {
    const fs::path path = temp_file("adf_io_skip.jsonl");
    write_text(path,
               R"({"flight_id":"bad","t":5,"lon":-98.0,"lat":39.0,"alt":9000})" "\n"
               R"({"flight_id":"bad","t":4,"lon":-98.0,"lat":39.0,"alt":9000})" "\n"
               R"({"flight_id":"good","t":0,"lon":-97.0,"lat":38.0,"alt":8000})" "\n"
               R"({"flight_id":"good","t":1,"lon":-97.0,"lat":38.1,"alt":8000})" "\n");
    IngestStats stats;
    const std::vector<Trajectory> flights = ingest_trajectories(path, &stats);
    REQUIRE(flights.size() == 1);
    CHECK(flights[0].flight_id == "good");
    CHECK(stats.flights_kept == 1);
    CHECK(stats.flights_skipped == 1);
    CHECK(!stats.warnings.empty());
    fs::remove(path);
}

TEST_CASE("bad latitude skips the flight rather than aborting the file") {
    const fs::path path = temp_file("adf_io_badlat.jsonl");
    write_text(path,
               R"({"flight_id":"x","t":0,"lon":-98.0,"lat":95.0,"alt":9000})" "\n"
               R"({"flight_id":"y","t":0,"lon":-97.0,"lat":38.0,"alt":8000})" "\n");
    IngestStats stats;
    const std::vector<Trajectory> flights = ingest_trajectories(path, &stats);
    REQUIRE(flights.size() == 1);
    CHECK(flights[0].flight_id == "y");
    CHECK(stats.flights_skipped == 1);
    fs::remove(path);
}

TEST_CASE("parse errors carry the line number") {
    const fs::path path = temp_file("adf_io_parse.jsonl");

    SUBCASE("malformed JSON") {
        write_text(path,
                   R"({"flight_id":"a","t":0,"lon":-98.0,"lat":39.0,"alt":1})" "\n"
                   R"({"flight_id":"a","t":1,"lon":-98.0,"lat":39.0,"alt":1})" "\n"
                   "{nope\n");
        try {
            ingest_trajectories(path);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 3);
        }
    }
    SUBCASE("missing key") {
        write_text(path, R"({"flight_id":"a","t":0,"lon":-98.0,"lat":39.0})" "\n");
        CHECK_THROWS_AS(ingest_trajectories(path), ParseError);
    }
    SUBCASE("wrong type") {
        write_text(path,
                   R"({"flight_id":"a","t":"zero","lon":-98.0,"lat":39.0,"alt":1})" "\n");
        CHECK_THROWS_AS(ingest_trajectories(path), ParseError);
    }
    SUBCASE("partial velocity") {
        write_text(path,
                   R"({"flight_id":"a","t":0,"lon":-98.0,"lat":39.0,"alt":1,"ve":5})" "\n");
        CHECK_THROWS_AS(ingest_trajectories(path), ParseError);
    }
    fs::remove(path);
}

TEST_CASE("empty or fully invalid inputs raise EmptyInput") {
    const fs::path path = temp_file("adf_io_empty.jsonl");
    write_text(path, "");
    CHECK_THROWS_AS(ingest_trajectories(path), EmptyInput);
    write_text(path,
               R"({"flight_id":"x","t":1,"lon":-98.0,"lat":39.0,"alt":1})" "\n"
               R"({"flight_id":"x","t":0,"lon":-98.0,"lat":39.0,"alt":1})" "\n");
    CHECK_THROWS_AS(ingest_trajectories(path), EmptyInput);
    CHECK_THROWS_AS(ingest_trajectories(temp_file("adf_io_missing.jsonl")),
                    DataError);
    fs::remove(path);
}

TEST_CASE("poi csv round trip with quoting") {
    const fs::path path = temp_file("adf_io_pois.csv");
    std::vector<PoiRecord> records;
    records.push_back({"plain", 3, -98.25, 39.5, 9123.0, 0.875});
    records.push_back({"with,comma", 0, 1e-17, -1.0, 0.0, 1.0});
    records.push_back({"say \"hi\"", 42, 179.99999999999997, -89.5, -12.5, 0.0});
    write_poi_csv(path, records);

    const std::vector<PoiRecord> back = read_poi_csv(path);
    REQUIRE(back.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(back[i].flight_id == records[i].flight_id);
        CHECK(back[i].point_index == records[i].point_index);
        CHECK(back[i].lon_deg == records[i].lon_deg);  // %.17g round-trips
        CHECK(back[i].lat_deg == records[i].lat_deg);
        CHECK(back[i].alt_m == records[i].alt_m);
        CHECK(back[i].score == records[i].score);
    }
    fs::remove(path);
}

TEST_CASE("poi csv reader rejections") {
    const fs::path path = temp_file("adf_io_badpois.csv");
    const std::string header = "flight_id,point_index,lon_deg,lat_deg,alt_m,score";

    SUBCASE("wrong header") {
        write_text(path, "a,b,c\n");
        try {
            read_poi_csv(path);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 1);
        }
    }
    SUBCASE("wrong column count") {
        write_text(path, header + "\nf1,0,-98.0,39.0,9000\n");
        try {
            read_poi_csv(path);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 2);
        }
    }
    SUBCASE("non-numeric field") {
        write_text(path, header + "\nf1,zero,-98.0,39.0,9000,0.5\n");
        CHECK_THROWS_AS(read_poi_csv(path), ParseError);
    }
    SUBCASE("non-finite score") {
        write_text(path, header + "\nf1,0,-98.0,39.0,9000,nan\n");
        CHECK_THROWS_AS(read_poi_csv(path), ParseError);
    }
    SUBCASE("unterminated quote") {
        write_text(path, header + "\n\"f1,0,-98.0,39.0,9000,0.5\n");
        CHECK_THROWS_AS(read_poi_csv(path), ParseError);
    }
    fs::remove(path);
}

TEST_CASE("scored point conversion and softplus") {
    std::vector<PoiRecord> records;
    records.push_back({"f", 0, 0.0, 0.0, 0.0, 0.5});
    const ScoredPointSet set = to_scored_points(records);
    REQUIRE(set.points.size() == 1);
    CHECK(set.scores[0] == 0.5);
    // (0, 0, 0) geodetic sits on the equator at the prime meridian.
    CHECK(set.points[0].x_m == doctest::Approx(6378137.0).epsilon(1e-12));

    records[0].score = -0.25;
    CHECK_THROWS_AS(to_scored_points(records), DataError);

    const ScoredPointSet soft = to_scored_points(records, true);
    CHECK(soft.scores[0] == doctest::Approx(softplus(-0.25)).epsilon(1e-15));

    CHECK(softplus(0.0) == doctest::Approx(0.6931471805599453).epsilon(1e-15));
    CHECK(softplus(1000.0) == 1000.0);  // log1p(exp(-1000)) underflows to 0
    CHECK(softplus(-1000.0) == 0.0);
    CHECK(softplus(-5.0) == doctest::Approx(std::log1p(std::exp(-5.0))).epsilon(1e-15));
}

TEST_CASE("trace csv structure") {
    const fs::path path = temp_file("adf_io_trace.csv");
    FieldTrace trace;
    trace.flight_id = "TR";
    trace.t_s = {0.0, 1.0};
    trace.geo = {GeodeticCoord::from_degrees(39.0, -98.0, 9000),
                 GeodeticCoord::from_degrees(39.5, -98.5, 9100)};
    trace.values = {1.5, 0.25};
    trace.poi_mask = {false, true};
    write_trace_csv(path, std::vector<FieldTrace>{trace});

    std::ifstream is(path);
    std::string line;
    std::getline(is, line);
    CHECK(line == "flight_id,point_index,lon_deg,lat_deg,alt_m,adf_value,is_poi");
    std::getline(is, line);
    CHECK(line == "TR,0,-98,39,9000,1.5,0");
    std::getline(is, line);
    CHECK(line == "TR,1,-98.5,39.5,9100,0.25,1");
    fs::remove(path);
}

TEST_CASE("report table format") {
    const MatchReport r = MatchReport::from_counts(16606, 10758, 4163, 150.0);
    const std::string table = report_table(std::vector<MatchReport>{r});
    CHECK(table ==
          "threshold_m\tprecision\trecall\tf1\tmatched\tunique_a\tunique_b\n"
          "150\t0.799557\t0.606856\t0.690005\t16606\t10758\t4163\n");
}

// --- CLI subprocess tests --------------------------------------------------

TEST_CASE("cli usage errors exit with code 2") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("no-such-command").exit_code == 2);
    CHECK(run_cli("evaluate --bogus-flag 1").exit_code == 2);
    CHECK(run_cli("extract-pois --trajectories x --points y --out z --method wrong")
              .exit_code == 2);
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("synth --help").exit_code == 0);
}

TEST_CASE("cli data errors exit with code 3") {
    const CliResult r = run_cli(
        "evaluate --pois-a /nonexistent/a.csv --pois-b /nonexistent/b.csv");
    CHECK(r.exit_code == 3);
}

TEST_CASE("cli pipeline end to end") {
    const fs::path dir = fs::temp_directory_path() / "adf_cli_pipeline";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string d = dir.string();

    // Deterministic synthetic corpus, twice: outputs must be byte-identical.
    CHECK(run_cli("synth --out " + d + " --seed 11 --flights 3 --samples 140 "
                  "--background 300")
              .exit_code == 0);
    CHECK(fs::exists(dir / "flights.jsonl"));
    CHECK(fs::exists(dir / "points.csv"));
    CHECK(fs::exists(dir / "truth.csv"));

    const fs::path dir2 = fs::temp_directory_path() / "adf_cli_pipeline2";
    fs::remove_all(dir2);
    fs::create_directories(dir2);
    CHECK(run_cli("synth --out " + dir2.string() +
                  " --seed 11 --flights 3 --samples 140 --background 300")
              .exit_code == 0);
    CHECK(slurp(dir / "flights.jsonl") == slurp(dir2 / "flights.jsonl"));
    CHECK(slurp(dir / "points.csv") == slurp(dir2 / "points.csv"));
    CHECK(slurp(dir / "truth.csv") == slurp(dir2 / "truth.csv"));

    // Index training is deterministic, and the snapshot reloads cleanly.
    CHECK(run_cli("build-index --points " + d + "/points.csv --out " + d +
                  "/idx.bin --seed 4")
              .exit_code == 0);
    CHECK(run_cli("build-index --points " + d + "/points.csv --out " + d +
                  "/idx2.bin --seed 4")
              .exit_code == 0);
    CHECK(slurp(dir / "idx.bin") == slurp(dir / "idx2.bin"));

    // Field extraction through the snapshot.
    CHECK(run_cli("extract-pois --trajectories " + d + "/flights.jsonl --points " +
                  d + "/points.csv --index " + d + "/idx.bin --out " + d +
                  "/trace.csv")
              .exit_code == 0);
    {
        std::ifstream is(dir / "trace.csv");
        std::string header;
        std::getline(is, header);
        CHECK(header == "flight_id,point_index,lon_deg,lat_deg,alt_m,adf_value,is_poi");
        std::size_t rows = 0;
        std::string line;
        while (std::getline(is, line)) ++rows;
        CHECK(rows == 3 * 140);
    }

    // Kinematic baseline, then metric evaluation of baseline vs truth.
    CHECK(run_cli("baseline-pois --trajectories " + d + "/flights.jsonl --out " +
                  d + "/base.csv")
              .exit_code == 0);
    const CliResult self_eval = run_cli("evaluate --pois-a " + d +
                                        "/truth.csv --pois-b " + d +
                                        "/truth.csv --threshold 150");
    CHECK(self_eval.exit_code == 0);
    CHECK(self_eval.out.find("1.000000") != std::string::npos);
    CHECK(run_cli("evaluate --pois-a " + d + "/truth.csv --pois-b " + d +
                  "/base.csv --thresholds 150,200,300 --out " + d + "/report.tsv")
              .exit_code == 0);
    CHECK(fs::exists(dir / "report.tsv"));

    // Latency benchmark over a generated workload.
    const CliResult bench = run_cli("bench --random 2000 --queries 100 --mode both");
    CHECK(bench.exit_code == 0);
    CHECK(bench.out.find("speedup") != std::string::npos);

    fs::remove_all(dir);
    fs::remove_all(dir2);
}

int main(int argc, char** argv) {
    g_bin_dir = fs::absolute(fs::path(argv[0])).parent_path();
    doctest::Context context;
    context.applyCommandLine(argc, argv);
    return context.run();
}
