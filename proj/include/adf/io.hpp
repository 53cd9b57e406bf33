#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "adf/evaluation.hpp"
#include "adf/extract.hpp"
#include "adf/field.hpp"
#include "adf/trajectory.hpp"

namespace adf {

struct IngestStats {
    std::size_t flights_kept = 0;
    std::size_t flights_skipped = 0;
    std::vector<std::string> warnings;
};

/// Reads trajectory JSONL: one object per line with flight_id, t, lon, lat,
/// alt and optional ve/vn/vu (all three or none). Rows group by flight_id in
/// first-appearance order. Unparseable lines throw ParseError with the line
/// number; flights failing validation (non-monotone time, bad coordinates)
/// are skipped with a warning in `stats`. Throws EmptyInput when nothing
/// valid remains.
std::vector<Trajectory> ingest_trajectories(const std::filesystem::path& path,
                                            IngestStats* stats = nullptr);

/// Inverse of ingest: one JSON object per line, numbers round-trip exactly.
void write_trajectories(const std::filesystem::path& path,
                        const std::vector<Trajectory>& flights);

/// POI CSV with header flight_id,point_index,lon_deg,lat_deg,alt_m,score and
/// RFC-4180 quoting. The reader rejects wrong column counts and non-finite
/// numbers (ParseError with line number); score range policy is applied
/// downstream (see to_scored_points).
void write_poi_csv(const std::filesystem::path& path,
                   std::span<const PoiRecord> records);
std::vector<PoiRecord> read_poi_csv(const std::filesystem::path& path);

/// POI rows as field input. Negative scores are rejected unless
/// apply_softplus is set, which maps every score through ln(1 + e^s).
ScoredPointSet to_scored_points(std::span<const PoiRecord> records,
                                bool apply_softplus = false);

/// ln(1 + e^x), overflow-safe; monotone map from any real score to (0, inf).
double softplus(double x);

/// Trace CSV: flight_id,point_index,lon_deg,lat_deg,alt_m,adf_value,is_poi.
void write_trace_csv(const std::filesystem::path& path,
                     std::span<const FieldTrace> traces);

/// Plot-ready TSV table: threshold_m, precision, recall, f1 plus the raw
/// counts, one row per report.
std::string report_table(std::span<const MatchReport> reports);
void write_report_tsv(const std::filesystem::path& path,
                      std::span<const MatchReport> reports);

}  // namespace adf
