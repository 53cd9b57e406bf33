#include "adf/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <unordered_map>

#include "adf/errors.hpp"

namespace adf {
namespace {

using nlohmann::json;

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(std::string_view field, std::size_t line) {
    double v = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw ParseError("not a number: '" + std::string(field) + "'", line);
    }
    return v;
}

std::uint64_t parse_index(std::string_view field, std::size_t line) {
    std::uint64_t v = 0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw ParseError("not an index: '" + std::string(field) + "'", line);
    }
    return v;
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// Splits one CSV record (RFC-4180 quoting, no embedded newlines).
std::vector<std::string> csv_split(const std::string& line, std::size_t lineno) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    fields.back() += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    if (quoted) throw ParseError("unterminated quote", lineno);
    return fields;
}

double require_number(const json& obj, const char* key, std::size_t line) {
    const auto it = obj.find(key);
    if (it == obj.end() || !it->is_number()) {
        throw ParseError(std::string("missing or non-numeric '") + key + "'", line);
    }
    return it->get<double>();
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

constexpr const char* kPoiHeader =
    "flight_id,point_index,lon_deg,lat_deg,alt_m,score";

}  // namespace

std::vector<Trajectory> ingest_trajectories(const std::filesystem::path& path,
                                            IngestStats* stats) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open " + path.string());

    std::unordered_map<std::string, std::size_t> slot;
    std::vector<Trajectory> flights;
    std::vector<std::uint8_t> bad;  // per-flight: dropped by sample validation
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(e.what(), lineno);
        }
        if (!obj.is_object()) throw ParseError("expected a JSON object", lineno);
        const auto id_it = obj.find("flight_id");
        if (id_it == obj.end() || !id_it->is_string()) {
            throw ParseError("missing or non-string 'flight_id'", lineno);
        }
        const std::string id = id_it->get<std::string>();
        const double t = require_number(obj, "t", lineno);
        const double lon = require_number(obj, "lon", lineno);
        const double lat = require_number(obj, "lat", lineno);
        const double alt = require_number(obj, "alt", lineno);
        const bool has_any_vel =
            obj.contains("ve") || obj.contains("vn") || obj.contains("vu");

        const auto [it, inserted] = slot.try_emplace(id, flights.size());
        if (inserted) {
            flights.push_back({id, {}});
            bad.push_back(0);
        }
        const std::size_t f = it->second;
        if (bad[f]) continue;

        TrajectorySample sample;
        sample.t_s = t;
        if (has_any_vel) {
            sample.vel_enu = Eigen::Vector3d(require_number(obj, "ve", lineno),
                                             require_number(obj, "vn", lineno),
                                             require_number(obj, "vu", lineno));
        }
        try {
            sample.geo = GeodeticCoord::from_degrees(lat, lon, alt);
        } catch (const DataError& e) {
            bad[f] = 1;
            if (stats) {
                stats->warnings.push_back("flight " + id + " skipped: " +
                                          e.what() + " (line " +
                                          std::to_string(lineno) + ")");
            }
            continue;
        }
        if (!std::isfinite(t) ||
            (!flights[f].samples.empty() && t <= flights[f].samples.back().t_s)) {
            bad[f] = 1;
            if (stats) {
                stats->warnings.push_back(
                    "flight " + id + " skipped: non-monotone timestamps (line " +
                    std::to_string(lineno) + ")");
            }
            continue;
        }
        flights[f].samples.push_back(std::move(sample));
    }

    std::vector<Trajectory> kept;
    std::size_t skipped = 0;
    for (std::size_t f = 0; f < flights.size(); ++f) {
        if (bad[f]) {
            ++skipped;
        } else {
            kept.push_back(std::move(flights[f]));
        }
    }
    if (stats) {
        stats->flights_kept = kept.size();
        stats->flights_skipped = skipped;
    }
    if (kept.empty()) {
        throw EmptyInput("no valid flights in " + path.string());
    }
    return kept;
}

void write_trajectories(const std::filesystem::path& path,
                        const std::vector<Trajectory>& flights) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw DataError("cannot open " + path.string() + " for writing");
    for (const auto& traj : flights) {
        for (const auto& s : traj.samples) {
            json obj;
            obj["flight_id"] = traj.flight_id;
            obj["t"] = s.t_s;
            obj["lon"] = s.geo.lon_deg();
            obj["lat"] = s.geo.lat_deg();
            obj["alt"] = s.geo.height_m;
            if (s.vel_enu) {
                obj["ve"] = s.vel_enu->x();
                obj["vn"] = s.vel_enu->y();
                obj["vu"] = s.vel_enu->z();
            }
            os << obj.dump() << '\n';
        }
    }
    if (!os) throw DataError("failed writing " + path.string());
}

void write_poi_csv(const std::filesystem::path& path,
                   std::span<const PoiRecord> records) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw DataError("cannot open " + path.string() + " for writing");
    os << kPoiHeader << '\n';
    for (const auto& r : records) {
        os << csv_quote(r.flight_id) << ',' << r.point_index << ','
           << fmt_double(r.lon_deg) << ',' << fmt_double(r.lat_deg) << ','
           << fmt_double(r.alt_m) << ',' << fmt_double(r.score) << '\n';
    }
    if (!os) throw DataError("failed writing " + path.string());
}

std::vector<PoiRecord> read_poi_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open " + path.string());
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(is, line)) throw EmptyInput(path.string() + " is empty");
    ++lineno;
    strip_cr(line);
    if (line != kPoiHeader) {
        throw ParseError("expected header '" + std::string(kPoiHeader) + "'",
                         lineno);
    }
    std::vector<PoiRecord> records;
    while (std::getline(is, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        const std::vector<std::string> f = csv_split(line, lineno);
        if (f.size() != 6) {
            throw ParseError("expected 6 columns, got " + std::to_string(f.size()),
                             lineno);
        }
        PoiRecord r;
        r.flight_id = f[0];
        r.point_index = static_cast<std::size_t>(parse_index(f[1], lineno));
        r.lon_deg = parse_double(f[2], lineno);
        r.lat_deg = parse_double(f[3], lineno);
        r.alt_m = parse_double(f[4], lineno);
        r.score = parse_double(f[5], lineno);
        if (!std::isfinite(r.lon_deg) || !std::isfinite(r.lat_deg) ||
            !std::isfinite(r.alt_m) || !std::isfinite(r.score)) {
            throw ParseError("non-finite value", lineno);
        }
        records.push_back(std::move(r));
    }
    return records;
}

double softplus(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

ScoredPointSet to_scored_points(std::span<const PoiRecord> records,
                                bool apply_softplus) {
    ScoredPointSet set;
    set.points.reserve(records.size());
    set.scores.reserve(records.size());
    for (const auto& r : records) {
        set.points.push_back(geodetic_to_ecef(
            GeodeticCoord::from_degrees(r.lat_deg, r.lon_deg, r.alt_m)));
        if (apply_softplus) {
            set.scores.push_back(softplus(r.score));
        } else if (r.score < 0.0) {
            throw DataError("negative score for flight " + r.flight_id +
                            " point " + std::to_string(r.point_index) +
                            " (use the softplus option to admit raw scores)");
        } else {
            set.scores.push_back(r.score);
        }
    }
    return set;
}

void write_trace_csv(const std::filesystem::path& path,
                     std::span<const FieldTrace> traces) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw DataError("cannot open " + path.string() + " for writing");
    os << "flight_id,point_index,lon_deg,lat_deg,alt_m,adf_value,is_poi\n";
    for (const auto& trace : traces) {
        for (std::size_t i = 0; i < trace.size(); ++i) {
            os << csv_quote(trace.flight_id) << ',' << i << ','
               << fmt_double(trace.geo[i].lon_deg()) << ','
               << fmt_double(trace.geo[i].lat_deg()) << ','
               << fmt_double(trace.geo[i].height_m) << ','
               << fmt_double(trace.values[i]) << ','
               << (trace.poi_mask[i] ? 1 : 0) << '\n';
        }
    }
    if (!os) throw DataError("failed writing " + path.string());
}

std::string report_table(std::span<const MatchReport> reports) {
    std::string out =
        "threshold_m\tprecision\trecall\tf1\tmatched\tunique_a\tunique_b\n";
    char buf[160];
    for (const auto& r : reports) {
        std::snprintf(buf, sizeof buf, "%g\t%.6f\t%.6f\t%.6f\t%zu\t%zu\t%zu\n",
                      r.threshold_m, r.precision, r.recall, r.f1, r.matched,
                      r.unique_a, r.unique_b);
        out += buf;
    }
    return out;
}

void write_report_tsv(const std::filesystem::path& path,
                      std::span<const MatchReport> reports) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw DataError("cannot open " + path.string() + " for writing");
    os << report_table(reports);
    if (!os) throw DataError("failed writing " + path.string());
}

}  // namespace adf
