// Command-line surface of the toolkit. Subcommands compose the library
// modules: synth | build-index | eval-field | baseline-pois | extract-pois |
// evaluate | ablate | bench. Exit codes: 0 success, 2 usage, 3 data error,
// 4 broken internal invariant.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "adf/errors.hpp"
#include "adf/evaluation.hpp"
#include "adf/extract.hpp"
#include "adf/field.hpp"
#include "adf/geo.hpp"
#include "adf/io.hpp"
#include "adf/ivf_index.hpp"
#include "adf/rng.hpp"
#include "adf/synth.hpp"
#include "adf/trajectory.hpp"

namespace fs = std::filesystem;

namespace {

struct FieldOpts {
    double sigma0 = 500.0;
    std::size_t k = 100;
    std::size_t nprobe = 16;
    double fixed_bandwidth = 0.0;  // > 0 selects fixed mode with this sigma

    adf::AdfParams params() const {
        adf::AdfParams p;
        p.k = k;
        p.nprobe = nprobe;
        if (fixed_bandwidth > 0.0) {
            p.sigma0_m = fixed_bandwidth;
            p.bandwidth = adf::BandwidthMode::kFixed;
        } else {
            p.sigma0_m = sigma0;
        }
        return p;
    }
};

void add_field_opts(CLI::App* cmd, FieldOpts& o) {
    cmd->add_option("--sigma0", o.sigma0,
                    "Base kernel bandwidth in meters (adaptive mode)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--k", o.k, "Neighbors per field evaluation")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--nprobe", o.nprobe, "Inverted lists scanned per query")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--fixed-bandwidth", o.fixed_bandwidth,
                    "Fixed kernel sigma in meters (disables the adaptive rule)")
        ->check(CLI::PositiveNumber);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<adf::EcefCoord> records_to_ecef(
    const std::vector<adf::PoiRecord>& records) {
    std::vector<adf::EcefCoord> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        out.push_back(adf::geodetic_to_ecef(
            adf::GeodeticCoord::from_degrees(r.lat_deg, r.lon_deg, r.alt_m)));
    }
    return out;
}

adf::IvfIndex load_or_train(const std::string& index_path,
                            const adf::ScoredPointSet& set, std::size_t nlist,
                            std::uint64_t seed) {
    if (!index_path.empty()) {
        adf::IvfIndex index = adf::IvfIndex::load(index_path);
        if (index.size() != set.points.size()) {
            throw adf::DataError("index holds " + std::to_string(index.size()) +
                                 " points but --points has " +
                                 std::to_string(set.points.size()));
        }
        return index;
    }
    const std::size_t n = set.points.size();
    adf::KMeansConfig cfg;
    cfg.seed = seed;
    return adf::IvfIndex::train(
        set.points, nlist == 0 ? adf::default_nlist(n) : nlist, cfg);
}

void sort_records(std::vector<adf::PoiRecord>& records) {
    std::sort(records.begin(), records.end(),
              [](const adf::PoiRecord& a, const adf::PoiRecord& b) {
                  if (a.flight_id != b.flight_id) return a.flight_id < b.flight_id;
                  return a.point_index < b.point_index;
              });
}

// ---------------------------------------------------------------- synth ---

struct SynthCmd {
    adf::SynthSpec spec;
    std::string out;

    void run() const {
        const adf::SynthData data = adf::generate_synthetic(spec);
        fs::create_directories(out);
        adf::write_trajectories(fs::path(out) / "flights.jsonl", data.flights);

        std::vector<adf::PoiRecord> point_rows;
        point_rows.reserve(data.points.points.size());
        for (std::size_t i = 0; i < data.points.points.size(); ++i) {
            const adf::GeodeticCoord g =
                adf::ecef_to_geodetic(data.points.points[i]);
            point_rows.push_back({"synthetic", i, g.lon_deg(), g.lat_deg(),
                                  g.height_m, data.points.scores[i]});
        }
        adf::write_poi_csv(fs::path(out) / "points.csv", point_rows);
        adf::write_poi_csv(fs::path(out) / "truth.csv", data.truth);
        std::cout << "wrote " << data.flights.size() << " flights, "
                  << point_rows.size() << " scored points, " << data.truth.size()
                  << " truth maneuvers to " << out << "\n";
    }
};

// ---------------------------------------------------------- build-index ---

struct BuildIndexCmd {
    std::string points_csv;
    std::string out;
    std::size_t nlist = 0;  // 0 = auto rule
    std::uint64_t seed = 0;
    bool softplus = false;

    void run() const {
        const auto records = adf::read_poi_csv(points_csv);
        const adf::ScoredPointSet set = adf::to_scored_points(records, softplus);
        const std::size_t chosen =
            nlist == 0 ? adf::default_nlist(set.points.size()) : nlist;
        adf::KMeansConfig cfg;
        cfg.seed = seed;
        const adf::IvfIndex index = adf::IvfIndex::train(set.points, chosen, cfg);
        index.validate();
        index.save(out);
        std::cout << "indexed " << index.size() << " points into "
                  << index.nlist() << " lists -> " << out << "\n";
    }
};

// ------------------------------------------------------------ eval-field ---

struct EvalFieldCmd {
    std::string points_csv;
    std::string index_path;
    std::string out;
    std::string mode = "ivf";
    FieldOpts field;
    std::size_t nlist = 0;
    std::uint64_t seed = 0;
    bool exclude_self = false;
    bool softplus = false;

    void run() const {
        const auto records = adf::read_poi_csv(points_csv);
        const adf::ScoredPointSet set = adf::to_scored_points(records, softplus);
        const adf::AdfParams params = field.params();

        std::vector<double> values;
        if (mode == "ivf") {
            const adf::IvfIndex index =
                load_or_train(index_path, set, nlist, seed);
            values = adf::evaluate_all(index, set.scores, params, exclude_self);
        } else {
            values.reserve(set.points.size());
            for (const auto& p : set.points) {
                values.push_back(
                    adf::evaluate_brute(set.points, set.scores, p, params));
            }
        }

        std::ofstream os(out, std::ios::trunc);
        if (!os) throw adf::DataError("cannot open " + out + " for writing");
        os << "point_index,lon_deg,lat_deg,alt_m,score,adf_value\n";
        for (std::size_t i = 0; i < records.size(); ++i) {
            os << i << ',' << fmt(records[i].lon_deg) << ','
               << fmt(records[i].lat_deg) << ',' << fmt(records[i].alt_m) << ','
               << fmt(records[i].score) << ',' << fmt(values[i]) << '\n';
        }
        if (!os) throw adf::DataError("failed writing " + out);
        std::cout << "evaluated the field at " << values.size() << " points -> "
                  << out << "\n";
    }
};

// --------------------------------------------------------- baseline-pois ---

struct BaselinePoisCmd {
    std::string traj_path;
    std::string out;
    double threshold = adf::kDefaultPoiThreshold;
    double lambda = adf::kDefaultLambda;

    void run() const {
        adf::IngestStats stats;
        const auto flights = adf::ingest_trajectories(traj_path, &stats);
        for (const auto& w : stats.warnings) std::cerr << "warning: " << w << "\n";

        std::vector<adf::PoiRecord> records;
        std::size_t skipped = 0;
        for (const auto& traj : flights) {
            try {
                auto flagged = adf::flight_pois(traj, threshold, lambda);
                records.insert(records.end(),
                               std::make_move_iterator(flagged.begin()),
                               std::make_move_iterator(flagged.end()));
            } catch (const adf::TooShort& e) {
                ++skipped;
                std::cerr << "warning: flight " << traj.flight_id
                          << " skipped: " << e.what() << "\n";
            }
        }
        sort_records(records);
        adf::write_poi_csv(out, records);
        std::cout << "flagged " << records.size() << " points across "
                  << flights.size() - skipped << " flights (" << skipped
                  << " skipped) -> " << out << "\n";
    }
};

// --------------------------------------------------------- extract-pois ---

struct ExtractPoisCmd {
    std::string traj_path;
    std::string points_csv;
    std::string index_path;
    std::string out;
    std::string method = "adf";
    std::string mode = "ivf";
    double percentile = 75.0;
    FieldOpts field;
    std::size_t nlist = 0;
    std::uint64_t seed = 0;
    bool softplus = false;

    void run() const {
        adf::IngestStats stats;
        auto flights = adf::ingest_trajectories(traj_path, &stats);
        for (const auto& w : stats.warnings) std::cerr << "warning: " << w << "\n";
        std::sort(flights.begin(), flights.end(),
                  [](const adf::Trajectory& a, const adf::Trajectory& b) {
                      return a.flight_id < b.flight_id;
                  });

        const auto records = adf::read_poi_csv(points_csv);
        const adf::ScoredPointSet set = adf::to_scored_points(records, softplus);
        const adf::AdfParams params = field.params();

        std::vector<adf::FieldTrace> traces;
        traces.reserve(flights.size());
        if (method == "knn") {
            const adf::IvfIndex index =
                load_or_train(index_path, set, nlist, seed);
            for (const auto& traj : flights) {
                traces.push_back(adf::knn_density_trace(
                    traj, index, params.k, params.nprobe, percentile));
            }
        } else if (mode == "brute") {
            for (const auto& traj : flights) {
                traces.push_back(adf::evaluate_trace_brute(
                    traj, set.points, set.scores, params, percentile));
            }
        } else {
            const adf::IvfIndex index =
                load_or_train(index_path, set, nlist, seed);
            traces = adf::evaluate_traces(flights, index, set.scores, params,
                                          percentile);
        }

        adf::write_trace_csv(out, traces);
        std::size_t flagged = 0;
        for (const auto& t : traces) {
            for (std::size_t i = 0; i < t.size(); ++i) flagged += t.poi_mask[i];
        }
        std::cout << "traced " << traces.size() << " flights, flagged "
                  << flagged << " samples -> " << out << "\n";
    }
};

// -------------------------------------------------------------- evaluate ---

struct EvaluateCmd {
    std::string pois_a;
    std::string pois_b;
    std::string out;
    double threshold = 200.0;
    std::vector<double> sweep;

    void run() const {
        const auto a = records_to_ecef(adf::read_poi_csv(pois_a));
        const auto b = records_to_ecef(adf::read_poi_csv(pois_b));
        std::vector<adf::MatchReport> reports;
        if (sweep.empty()) {
            reports.push_back(adf::spatial_match(a, b, threshold));
        } else {
            reports = adf::threshold_sweep(a, b, sweep);
        }
        const std::string table = adf::report_table(reports);
        std::cout << table;
        if (!out.empty()) adf::write_report_tsv(out, reports);
    }
};

// ---------------------------------------------------------------- ablate ---

struct AblateCmd {
    std::string traj_path;
    std::string points_csv;
    std::string index_path;
    std::string baseline_csv;
    std::string out;
    double threshold = 200.0;
    double percentile = 75.0;
    std::size_t nlist = 0;
    std::uint64_t seed = 0;
    bool softplus = false;

    struct Row {
        std::string axis;
        std::string value;
        adf::MatchReport report;
        double ms_per_query = 0.0;
    };

    Row run_config(const std::string& axis, const std::string& value,
                   const std::vector<adf::Trajectory>& flights,
                   const adf::IvfIndex& index, const adf::ScoredPointSet& set,
                   const std::vector<adf::EcefCoord>& baseline,
                   const adf::AdfParams& params) const {
        const auto start = std::chrono::steady_clock::now();
        const auto traces =
            adf::evaluate_traces(flights, index, set.scores, params, percentile);
        const auto stop = std::chrono::steady_clock::now();

        std::vector<adf::EcefCoord> flagged;
        std::size_t n_samples = 0;
        for (const auto& t : traces) {
            n_samples += t.size();
            const auto pts = adf::flagged_points(t);
            flagged.insert(flagged.end(), pts.begin(), pts.end());
        }
        Row row;
        row.axis = axis;
        row.value = value;
        row.report = adf::spatial_match(baseline, flagged, threshold);
        row.ms_per_query =
            std::chrono::duration<double, std::milli>(stop - start).count() /
            std::max<std::size_t>(n_samples, 1);
        return row;
    }

    void run() const {
        adf::IngestStats stats;
        auto flights = adf::ingest_trajectories(traj_path, &stats);
        for (const auto& w : stats.warnings) std::cerr << "warning: " << w << "\n";
        std::sort(flights.begin(), flights.end(),
                  [](const adf::Trajectory& a, const adf::Trajectory& b) {
                      return a.flight_id < b.flight_id;
                  });

        const auto records = adf::read_poi_csv(points_csv);
        const adf::ScoredPointSet set = adf::to_scored_points(records, softplus);
        const adf::IvfIndex index = load_or_train(index_path, set, nlist, seed);

        std::vector<adf::PoiRecord> baseline_records;
        if (baseline_csv.empty()) {
            for (const auto& traj : flights) {
                try {
                    auto flagged = adf::flight_pois(traj);
                    baseline_records.insert(baseline_records.end(),
                                            flagged.begin(), flagged.end());
                } catch (const adf::TooShort&) {
                }
            }
        } else {
            baseline_records = adf::read_poi_csv(baseline_csv);
        }
        const auto baseline = records_to_ecef(baseline_records);

        std::vector<Row> rows;
        adf::AdfParams base;  // sigma0 500 adaptive, k 100, nprobe 16
        {
            adf::AdfParams p = base;
            rows.push_back(run_config("bandwidth", "adaptive", flights, index,
                                      set, baseline, p));
            for (const double s : {250.0, 500.0, 750.0}) {
                p = base;
                p.sigma0_m = s;
                p.bandwidth = adf::BandwidthMode::kFixed;
                rows.push_back(run_config("bandwidth",
                                          "fixed" + std::to_string(int(s)),
                                          flights, index, set, baseline, p));
            }
        }
        for (const std::size_t nprobe : {4UL, 8UL, 16UL, 64UL, 256UL}) {
            adf::AdfParams p = base;
            p.nprobe = nprobe;
            rows.push_back(run_config("nprobe", std::to_string(nprobe), flights,
                                      index, set, baseline, p));
        }
        for (const std::size_t k : {50UL, 100UL, 150UL}) {
            adf::AdfParams p = base;
            p.k = k;
            rows.push_back(run_config("k", std::to_string(k), flights, index,
                                      set, baseline, p));
        }

        std::string table =
            "axis\tvalue\tprecision\trecall\tf1\tmatched\tunique_a\tunique_b\t"
            "ms_per_query\n";
        char buf[256];
        for (const auto& r : rows) {
            std::snprintf(buf, sizeof buf,
                          "%s\t%s\t%.6f\t%.6f\t%.6f\t%zu\t%zu\t%zu\t%.4f\n",
                          r.axis.c_str(), r.value.c_str(), r.report.precision,
                          r.report.recall, r.report.f1, r.report.matched,
                          r.report.unique_a, r.report.unique_b, r.ms_per_query);
            table += buf;
        }
        std::cout << table;
        if (!out.empty()) {
            std::ofstream os(out, std::ios::trunc);
            if (!os) throw adf::DataError("cannot open " + out + " for writing");
            os << table;
            if (!os) throw adf::DataError("failed writing " + out);
        }
    }
};

// ------------------------------------------------------------------ bench ---

struct BenchCmd {
    std::string points_csv;
    std::string index_path;
    std::size_t random_n = 0;
    std::string mode = "both";
    std::size_t n_queries = 1000;
    std::size_t nlist = 0;
    std::uint64_t seed = 0;
    bool softplus = false;
    FieldOpts field;

    void run() const {
        if (points_csv.empty() == (random_n == 0)) {
            throw CLI::ValidationError(
                "bench", "exactly one of --points or --random is required");
        }
        adf::ScoredPointSet set;
        if (random_n > 0) {
            adf::RngStream rng(seed, "bench/points");
            set.points.reserve(random_n);
            set.scores.reserve(random_n);
            const adf::GeodeticCoord origin =
                adf::GeodeticCoord::from_degrees(39.0, -98.0, 0.0);
            for (std::size_t i = 0; i < random_n; ++i) {
                const adf::EnuCoord enu{rng.uniform(-150000.0, 150000.0),
                                        rng.uniform(-150000.0, 150000.0),
                                        rng.uniform(8000.0, 12000.0)};
                set.points.push_back(adf::enu_to_ecef(enu, origin));
                set.scores.push_back(rng.uniform());
            }
        } else {
            set = adf::to_scored_points(adf::read_poi_csv(points_csv), softplus);
        }
        const adf::IvfIndex index = load_or_train(index_path, set, nlist, seed);
        const adf::AdfParams params = field.params();

        auto print = [](const adf::BenchReport& r) {
            std::printf("%-6s %8zu queries  %10.4f ms/query\n",
                        r.mode == adf::BenchMode::kIvf ? "ivf" : "brute",
                        r.n_queries, r.ms_per_query);
        };
        if (mode == "ivf" || mode == "both") {
            const auto r = adf::latency_bench(index, set.scores, params,
                                              adf::BenchMode::kIvf, n_queries,
                                              seed);
            print(r);
            if (mode == "both") {
                const auto rb = adf::latency_bench(index, set.scores, params,
                                                   adf::BenchMode::kBrute,
                                                   n_queries, seed);
                print(rb);
                double max_rel = 0.0;
                for (std::size_t i = 0; i < r.values.size(); ++i) {
                    const double denom = std::max(
                        {std::abs(r.values[i]), std::abs(rb.values[i]), 1e-300});
                    max_rel = std::max(
                        max_rel, std::abs(r.values[i] - rb.values[i]) / denom);
                }
                std::printf("speedup %.2fx, max relative value gap %.3g\n",
                            rb.ms_per_query / r.ms_per_query, max_rel);
            }
        } else if (mode == "brute") {
            print(adf::latency_bench(index, set.scores, params,
                                     adf::BenchMode::kBrute, n_queries, seed));
        } else {
            throw CLI::ValidationError("--mode", "must be ivf, brute, or both");
        }
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive density field toolkit"};
    app.require_subcommand(1);

    auto synth = std::make_shared<SynthCmd>();
    {
        CLI::App* cmd = app.add_subcommand(
            "synth", "Generate a synthetic flight corpus with ground truth");
        cmd->add_option("--out", synth->out, "Output directory")->required();
        cmd->add_option("--seed", synth->spec.seed, "Master seed");
        cmd->add_option("--flights", synth->spec.n_flights, "Flight count")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--samples", synth->spec.samples_per_flight,
                        "Samples per flight")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--maneuvers", synth->spec.maneuvers_per_flight,
                        "Maneuvers per flight (0 = straight cruise)");
        cmd->add_option("--noise", synth->spec.noise_m,
                        "Per-axis position jitter in meters");
        cmd->add_option("--background", synth->spec.n_background,
                        "Background scored points");
        cmd->add_option("--pois-per-event", synth->spec.pois_per_event,
                        "Scored points per maneuver onset/exit");
        cmd->callback([synth] { synth->run(); });
    }

    auto build = std::make_shared<BuildIndexCmd>();
    {
        CLI::App* cmd = app.add_subcommand(
            "build-index", "Train an IVF index over a scored point CSV");
        cmd->add_option("--points", build->points_csv, "Scored point CSV")
            ->required();
        cmd->add_option("--out", build->out, "Index snapshot path")->required();
        cmd->add_option("--nlist", build->nlist,
                        "Inverted list count (0 = auto rule)");
        cmd->add_option("--seed", build->seed, "Training seed");
        cmd->add_flag("--softplus", build->softplus,
                      "Map scores through softplus instead of rejecting "
                      "negatives");
        cmd->callback([build] { build->run(); });
    }

    auto evalf = std::make_shared<EvalFieldCmd>();
    {
        CLI::App* cmd = app.add_subcommand(
            "eval-field", "Evaluate the field at every input point");
        cmd->add_option("--points", evalf->points_csv, "Scored point CSV")
            ->required();
        cmd->add_option("--index", evalf->index_path,
                        "Index snapshot (trained on --points if omitted)");
        cmd->add_option("--out", evalf->out, "Output CSV")->required();
        cmd->add_option("--mode", evalf->mode, "ivf or brute")
            ->check(CLI::IsMember({"ivf", "brute"}));
        cmd->add_option("--nlist", evalf->nlist, "List count when training");
        cmd->add_option("--seed", evalf->seed, "Training seed");
        cmd->add_flag("--exclude-self", evalf->exclude_self,
                      "Drop each point's own kernel contribution (ivf mode)");
        cmd->add_flag("--softplus", evalf->softplus, "Softplus score transform");
        add_field_opts(cmd, evalf->field);
        cmd->callback([evalf] {
            if (evalf->exclude_self && evalf->mode == "brute") {
                throw CLI::ValidationError(
                    "--exclude-self", "only supported with --mode ivf");
            }
            evalf->run();
        });
    }

    auto baseline = std::make_shared<BaselinePoisCmd>();
    {
        CLI::App* cmd = app.add_subcommand(
            "baseline-pois",
            "Kinematic-anomaly POIs from trajectories (prediction residuals)");
        cmd->add_option("--trajectories", baseline->traj_path, "Trajectory JSONL")
            ->required();
        cmd->add_option("--out", baseline->out, "Output POI CSV")->required();
        cmd->add_option("--baseline-threshold", baseline->threshold,
                        "Score threshold for flagging")
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--lambda", baseline->lambda,
                        "Covariance regularization")
            ->check(CLI::PositiveNumber);
        cmd->callback([baseline] { baseline->run(); });
    }

    auto extract = std::make_shared<ExtractPoisCmd>();
    {
        CLI::App* cmd = app.add_subcommand(
            "extract-pois",
            "Field values along trajectories with per-trace P75 masks");
        cmd->add_option("--trajectories", extract->traj_path, "Trajectory JSONL")
            ->required();
        cmd->add_option("--points", extract->points_csv, "Scored point CSV")
            ->required();
        cmd->add_option("--index", extract->index_path,
                        "Index snapshot (trained on --points if omitted)");
        cmd->add_option("--out", extract->out, "Output trace CSV")->required();
        cmd->add_option("--method", extract->method,
                        "adf (field) or knn (density baseline)")
            ->check(CLI::IsMember({"adf", "knn"}));
        cmd->add_option("--mode", extract->mode, "ivf or brute (adf method)")
            ->check(CLI::IsMember({"ivf", "brute"}));
        cmd->add_option("--percentile", extract->percentile,
                        "Per-trace mask percentile")
            ->check(CLI::Range(0.0, 100.0));
        cmd->add_option("--nlist", extract->nlist, "List count when training");
        cmd->add_option("--seed", extract->seed, "Training seed");
        cmd->add_flag("--softplus", extract->softplus,
                      "Softplus score transform");
        add_field_opts(cmd, extract->field);
        cmd->callback([extract] { extract->run(); });
    }

    auto evaluate = std::make_shared<EvaluateCmd>();
    {
        CLI::App* cmd = app.add_subcommand(
            "evaluate", "Spatially match two POI CSVs and report P/R/F1");
        cmd->add_option("--pois-a", evaluate->pois_a,
                        "Reference POI CSV (recall denominator)")
            ->required();
        cmd->add_option("--pois-b", evaluate->pois_b,
                        "Detection POI CSV (precision denominator)")
            ->required();
        cmd->add_option("--threshold", evaluate->threshold,
                        "Match distance in meters")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--thresholds", evaluate->sweep,
                        "Ascending sweep of match distances (overrides "
                        "--threshold)")
            ->delimiter(',');
        cmd->add_option("--out", evaluate->out, "Report TSV path");
        cmd->callback([evaluate] { evaluate->run(); });
    }

    auto ablate = std::make_shared<AblateCmd>();
    {
        CLI::App* cmd = app.add_subcommand(
            "ablate",
            "Sweep bandwidth/nprobe/k and report match metrics per config");
        cmd->add_option("--trajectories", ablate->traj_path, "Trajectory JSONL")
            ->required();
        cmd->add_option("--points", ablate->points_csv, "Scored point CSV")
            ->required();
        cmd->add_option("--index", ablate->index_path,
                        "Index snapshot (trained on --points if omitted)");
        cmd->add_option("--baseline", ablate->baseline_csv,
                        "Baseline POI CSV (computed from trajectories if "
                        "omitted)");
        cmd->add_option("--threshold", ablate->threshold,
                        "Match distance in meters")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--percentile", ablate->percentile,
                        "Per-trace mask percentile")
            ->check(CLI::Range(0.0, 100.0));
        cmd->add_option("--nlist", ablate->nlist, "List count when training");
        cmd->add_option("--seed", ablate->seed, "Training seed");
        cmd->add_flag("--softplus", ablate->softplus, "Softplus score transform");
        cmd->add_option("--out", ablate->out, "Report TSV path");
        cmd->callback([ablate] { ablate->run(); });
    }

    auto bench = std::make_shared<BenchCmd>();
    {
        CLI::App* cmd = app.add_subcommand(
            "bench", "Per-query field evaluation latency, indexed vs brute");
        cmd->add_option("--points", bench->points_csv, "Scored point CSV");
        cmd->add_option("--random", bench->random_n,
                        "Generate this many random points instead of --points");
        cmd->add_option("--index", bench->index_path,
                        "Index snapshot (trained if omitted)");
        cmd->add_option("--mode", bench->mode, "ivf, brute, or both")
            ->check(CLI::IsMember({"ivf", "brute", "both"}));
        cmd->add_option("--queries", bench->n_queries, "Query count (>= 100)")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--nlist", bench->nlist, "List count when training");
        cmd->add_option("--seed", bench->seed, "Workload seed");
        cmd->add_flag("--softplus", bench->softplus, "Softplus score transform");
        add_field_opts(cmd, bench->field);
        cmd->callback([bench] { bench->run(); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const adf::InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    } catch (const adf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
