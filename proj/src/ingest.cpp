#include "cryptonet/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cryptonet/errors.hpp"

namespace cryptonet {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

// ISO-8601 with Z suffix at hourly (or finer) resolution.
std::int64_t parse_timestamp(const std::string& s, std::size_t line_no) {
    int y, mo, d, h, mi = 0, se = 0;
    char tail = 0;
    int got = std::sscanf(s.c_str(), "%d-%d-%dT%d:%d:%d%c", &y, &mo, &d, &h, &mi, &se, &tail);
    if (got < 4 || (got >= 7 && tail != 'Z'))
        throw ParseError("line " + std::to_string(line_no) + ": bad timestamp '" + s + "'");
    if (got < 7 && s.back() != 'Z')
        throw ParseError("line " + std::to_string(line_no) + ": timestamp missing Z suffix: '" + s + "'");
    if (h < 0 || h > 23 || mi < 0 || mi > 59 || se < 0 || se > 60)
        throw ParseError("line " + std::to_string(line_no) + ": bad time of day in '" + s + "'");
    return static_cast<std::int64_t>(day_from_ymd(y, mo, d)) * 86400 + h * 3600 + mi * 60 + se;
}

double parse_positive_real(const std::string& s, std::size_t line_no, const char* what) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": bad " + what + " '" + s + "'");
    }
    if (pos != s.size())
        throw ParseError("line " + std::to_string(line_no) + ": bad " + what + " '" + s + "'");
    if (!(v > 0.0) || !std::isfinite(v))
        throw ValidationError("line " + std::to_string(line_no) + ": " + what +
                              " must be positive, got '" + s + "'");
    return v;
}

std::int64_t parse_volume(const std::string& s, std::size_t line_no, const char* what) {
    std::size_t pos = 0;
    long long v;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": bad " + what + " '" + s + "'");
    }
    if (pos != s.size())
        throw ParseError("line " + std::to_string(line_no) + ": bad " + what + " '" + s + "'");
    if (v < 0)
        throw ValidationError("line " + std::to_string(line_no) + ": " + what +
                              " must be non-negative, got " + std::to_string(v));
    return v;
}

} // namespace

std::vector<RawRecord> parse_records(std::istream& source) {
    std::string line;
    if (!std::getline(source, line))
        throw ParseError("empty record file");
    if (split_csv_line(line) !=
        std::vector<std::string>{"asset_id", "timestamp", "price", "pos_volume", "neg_volume"})
        throw ParseError("line 1: bad header, expected "
                         "'asset_id,timestamp,price,pos_volume,neg_volume'");

    std::vector<RawRecord> records;
    std::size_t line_no = 1;
    while (std::getline(source, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 5)
            throw ParseError("line " + std::to_string(line_no) + ": expected 5 fields, got " +
                             std::to_string(fields.size()));
        RawRecord rec;
        rec.asset_id = fields[0];
        if (rec.asset_id.empty())
            throw ParseError("line " + std::to_string(line_no) + ": empty asset_id");
        rec.timestamp = parse_timestamp(fields[1], line_no);
        if (!fields[2].empty()) rec.price = parse_positive_real(fields[2], line_no, "price");
        if (!fields[3].empty()) rec.pos_volume = parse_volume(fields[3], line_no, "pos_volume");
        if (!fields[4].empty()) rec.neg_volume = parse_volume(fields[4], line_no, "neg_volume");
        records.push_back(std::move(rec));
    }

    std::stable_sort(records.begin(), records.end(), [](const RawRecord& a, const RawRecord& b) {
        if (a.asset_id != b.asset_id) return a.asset_id < b.asset_id;
        return a.timestamp < b.timestamp;
    });
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i].asset_id == records[i - 1].asset_id &&
            records[i].timestamp == records[i - 1].timestamp)
            throw ValidationError("duplicate record for asset '" + records[i].asset_id + "' at " +
                                  day_to_string(static_cast<Day>(records[i].timestamp / 86400)));
    }
    return records;
}

std::vector<RawRecord> parse_records_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot read '" + path + "'");
    return parse_records(in);
}

std::vector<ObservationSeries> aggregate_daily(const std::vector<RawRecord>& records) {
    struct DayAccum {
        double price_sum = 0.0;
        std::size_t price_count = 0;
        std::int64_t pos = 0, neg = 0;
        bool has_pos = false, has_neg = false;
    };
    // asset -> day -> accumulator; ordered so output is deterministic.
    std::map<std::string, std::map<Day, DayAccum>> by_asset;
    for (const auto& rec : records) {
        const Day d = static_cast<Day>(rec.timestamp >= 0 ? rec.timestamp / 86400
                                                          : (rec.timestamp - 86399) / 86400);
        auto& acc = by_asset[rec.asset_id][d];
        if (rec.price) {
            acc.price_sum += *rec.price;
            acc.price_count += 1;
        }
        if (rec.pos_volume) {
            acc.pos += *rec.pos_volume;
            acc.has_pos = true;
        }
        if (rec.neg_volume) {
            acc.neg += *rec.neg_volume;
            acc.has_neg = true;
        }
    }

    std::vector<ObservationSeries> out;
    for (const auto& [asset, days] : by_asset) {
        ObservationSeries price{asset, SeriesKind::Price, {}, {}};
        ObservationSeries pos{asset, SeriesKind::PosSentiment, {}, {}};
        ObservationSeries neg{asset, SeriesKind::NegSentiment, {}, {}};
        for (const auto& [day, acc] : days) {
            if (acc.price_count > 0) {
                price.days.push_back(day);
                price.values.push_back(acc.price_sum / static_cast<double>(acc.price_count));
            }
            if (acc.has_pos) {
                pos.days.push_back(day);
                pos.values.push_back(static_cast<double>(acc.pos));
            }
            if (acc.has_neg) {
                neg.days.push_back(day);
                neg.values.push_back(static_cast<double>(acc.neg));
            }
        }
        for (auto& s : {&price, &pos, &neg}) {
            if (!s->days.empty()) out.push_back(std::move(*s));
        }
    }
    return out;
}

ObservationSeries log_variation(const ObservationSeries& series, ZeroVolumePolicy policy) {
    ObservationSeries out{series.asset_id, series.kind, {}, {}};
    auto usable = [&](double v) -> std::optional<double> {
        if (series.kind == SeriesKind::Price) {
            if (v <= 0.0)
                throw ValidationError("asset '" + series.asset_id + "': non-positive price");
            return std::log(v);
        }
        if (policy == ZeroVolumePolicy::ShiftedLog) return std::log1p(v);
        if (v <= 0.0) return std::nullopt; // zero-message day counts as missing
        return std::log(v);
    };
    for (std::size_t i = 1; i < series.days.size(); ++i) {
        if (series.days[i] != series.days[i - 1] + 1) continue; // gap, nothing emitted
        auto prev = usable(series.values[i - 1]);
        auto cur = usable(series.values[i]);
        if (prev && cur) {
            out.days.push_back(series.days[i]);
            out.values.push_back(*cur - *prev);
        }
    }
    return out;
}

Panel build_panel(const std::vector<ObservationSeries>& series) {
    if (series.empty()) throw ValidationError("cannot build a panel from zero series");
    std::set<Day> all_days;
    for (const auto& s : series) all_days.insert(s.days.begin(), s.days.end());

    Panel panel;
    panel.calendar.assign(all_days.begin(), all_days.end());
    const std::size_t nd = panel.calendar.size();
    panel.data.assign(series.size() * nd, 0.0);
    panel.mask.assign(series.size() * nd, 0);

    for (std::size_t r = 0; r < series.size(); ++r) {
        const auto& s = series[r];
        panel.series_ids.push_back({s.asset_id, s.kind});
        for (std::size_t k = 0; k < s.days.size(); ++k) {
            auto it = std::lower_bound(panel.calendar.begin(), panel.calendar.end(), s.days[k]);
            const std::size_t col = static_cast<std::size_t>(it - panel.calendar.begin());
            panel.data[r * nd + col] = s.values[k];
            panel.mask[r * nd + col] = 1;
        }
    }
    return panel;
}

Panel ingest_csv(const std::string& path, ZeroVolumePolicy policy) {
    auto records = parse_records_file(path);
    auto daily = aggregate_daily(records);
    std::vector<ObservationSeries> variations;
    variations.reserve(daily.size());
    for (const auto& s : daily) {
        auto v = log_variation(s, policy);
        if (!v.days.empty()) variations.push_back(std::move(v));
    }
    if (variations.empty())
        throw ValidationError("no series with at least two consecutive observed days");
    return build_panel(variations);
}

} // namespace cryptonet
