#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cryptonet/panel.hpp"

namespace cryptonet {

// One raw hourly record. Empty CSV fields arrive as disengaged optionals.
struct RawRecord {
    std::string asset_id;
    std::int64_t timestamp = 0; // seconds since epoch, UTC, hourly resolution
    std::optional<double> price;
    std::optional<std::int64_t> pos_volume;
    std::optional<std::int64_t> neg_volume;
};

// Daily values for one (asset, kind): mean price or total message volume.
struct ObservationSeries {
    std::string asset_id;
    SeriesKind kind = SeriesKind::Price;
    std::vector<Day> days;     // strictly increasing
    std::vector<double> values;
};

// How a zero sentiment volume is treated before the logarithm.
enum class ZeroVolumePolicy {
    TreatMissing, // ln(0) day dropped from the series (default)
    ShiftedLog,   // ln(1 + v) transform, zero days kept
};

// Parses the record CSV (header asset_id,timestamp,price,pos_volume,neg_volume).
// Records come back grouped by asset and sorted by timestamp; a duplicate
// (asset, timestamp) is a hard error, as is any malformed row.
std::vector<RawRecord> parse_records(std::istream& source);
std::vector<RawRecord> parse_records_file(const std::string& path);

// Per asset: one Price series (mean of hourly prices per UTC day) and one
// Pos/NegSentiment series (sum of hourly volumes per UTC day). Days without
// records are absent, never zero-filled.
std::vector<ObservationSeries> aggregate_daily(const std::vector<RawRecord>& records);

// Day-over-day log differences for consecutive calendar days. A volume day
// with value 0 is treated per `policy`; a price <= 0 is a data error.
ObservationSeries log_variation(const ObservationSeries& series,
                                ZeroVolumePolicy policy = ZeroVolumePolicy::TreatMissing);

// Union calendar across all series; mask true exactly where a series has a
// valid log-variation.
Panel build_panel(const std::vector<ObservationSeries>& series);

// parse -> aggregate -> log-variations -> panel.
Panel ingest_csv(const std::string& path,
                 ZeroVolumePolicy policy = ZeroVolumePolicy::TreatMissing);

} // namespace cryptonet
