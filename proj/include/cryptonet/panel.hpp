#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cryptonet/rankstats.hpp"

namespace cryptonet {

// UTC calendar day, stored as days since 1970-01-01.
using Day = std::int32_t;

Day day_from_ymd(int year, int month, int day);
void ymd_from_day(Day d, int& year, int& month, int& day);
std::string day_to_string(Day d);          // YYYY-MM-DD
Day day_from_string(const std::string& s); // throws ParseError

enum class SeriesKind { Price, PosSentiment, NegSentiment };

const char* series_kind_name(SeriesKind k);
SeriesKind series_kind_from_name(const std::string& name);

struct SeriesId {
    std::string asset_id;
    SeriesKind kind;

    bool operator==(const SeriesId&) const = default;
};

// Aligned daily matrix of log-variations over a shared calendar. `data` is
// row-major, |series| x |calendar|; a cell is meaningful only where `mask` is
// true. Immutable after construction and safe to share across threads.
struct Panel {
    std::vector<Day> calendar;
    std::vector<SeriesId> series_ids;
    std::vector<double> data;
    std::vector<std::uint8_t> mask;

    std::size_t n_series() const { return series_ids.size(); }
    std::size_t n_days() const { return calendar.size(); }

    double value(std::size_t row, std::size_t col) const { return data[row * n_days() + col]; }
    bool valid(std::size_t row, std::size_t col) const { return mask[row * n_days() + col] != 0; }

    // Row indices for one signal kind, in panel order.
    std::vector<std::size_t> rows_of_kind(SeriesKind kind) const;
    // Row index of (asset, kind), or npos.
    std::size_t find_row(const std::string& asset_id, SeriesKind kind) const;
};

// Values of rows i and j restricted to days where both masks are true, in
// calendar order. n may be zero.
struct Overlap {
    std::vector<double> xs;
    std::vector<double> ys;
    std::size_t n = 0;
};

Overlap pairwise_overlap(const Panel& panel, std::size_t i, std::size_t j);

// Count of shared valid days without materializing the values.
std::size_t overlap_count(const Panel& panel, std::size_t i, std::size_t j);

// Self-describing JSON document with keys calendar / series_ids / data / mask.
void save_panel(const Panel& panel, const std::string& path);
Panel load_panel(const std::string& path);
void write_panel(const Panel& panel, std::ostream& out);
Panel read_panel(std::istream& in);

} // namespace cryptonet
