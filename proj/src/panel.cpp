#include "cryptonet/panel.hpp"

#include <cstdio>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "cryptonet/errors.hpp"

namespace cryptonet {

// Civil-date conversions (Hinnant's algorithm), valid far beyond the dates
// this pipeline sees.
Day day_from_ymd(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 +
                         static_cast<unsigned>(d) - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<Day>(era * 146097 + static_cast<int>(doe) - 719468);
}

void ymd_from_day(Day z0, int& y, int& m, int& d) {
    int z = z0 + 719468;
    const int era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int yr = static_cast<int>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = yr + (m <= 2);
}

std::string day_to_string(Day d) {
    int y, m, dd;
    ymd_from_day(d, y, m, dd);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, dd);
    return buf;
}

Day day_from_string(const std::string& s) {
    int y, m, d;
    if (std::sscanf(s.c_str(), "%d-%d-%d", &y, &m, &d) != 3 || m < 1 || m > 12 || d < 1 || d > 31)
        throw ParseError("bad date: '" + s + "'");
    return day_from_ymd(y, m, d);
}

const char* series_kind_name(SeriesKind k) {
    switch (k) {
    case SeriesKind::Price: return "price";
    case SeriesKind::PosSentiment: return "pos_sentiment";
    case SeriesKind::NegSentiment: return "neg_sentiment";
    }
    return "?";
}

SeriesKind series_kind_from_name(const std::string& name) {
    if (name == "price") return SeriesKind::Price;
    if (name == "pos_sentiment") return SeriesKind::PosSentiment;
    if (name == "neg_sentiment") return SeriesKind::NegSentiment;
    throw ParseError("unknown series kind: '" + name + "'");
}

std::vector<std::size_t> Panel::rows_of_kind(SeriesKind kind) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < series_ids.size(); ++i) {
        if (series_ids[i].kind == kind) rows.push_back(i);
    }
    return rows;
}

std::size_t Panel::find_row(const std::string& asset_id, SeriesKind kind) const {
    for (std::size_t i = 0; i < series_ids.size(); ++i) {
        if (series_ids[i].kind == kind && series_ids[i].asset_id == asset_id) return i;
    }
    return std::numeric_limits<std::size_t>::max();
}

Overlap pairwise_overlap(const Panel& panel, std::size_t i, std::size_t j) {
    Overlap out;
    const std::size_t nd = panel.n_days();
    const std::uint8_t* mi = panel.mask.data() + i * nd;
    const std::uint8_t* mj = panel.mask.data() + j * nd;
    const double* vi = panel.data.data() + i * nd;
    const double* vj = panel.data.data() + j * nd;
    for (std::size_t t = 0; t < nd; ++t) {
        if (mi[t] && mj[t]) {
            out.xs.push_back(vi[t]);
            out.ys.push_back(vj[t]);
        }
    }
    out.n = out.xs.size();
    return out;
}

std::size_t overlap_count(const Panel& panel, std::size_t i, std::size_t j) {
    const std::size_t nd = panel.n_days();
    const std::uint8_t* mi = panel.mask.data() + i * nd;
    const std::uint8_t* mj = panel.mask.data() + j * nd;
    std::size_t n = 0;
    for (std::size_t t = 0; t < nd; ++t) n += (mi[t] && mj[t]) ? 1 : 0;
    return n;
}

void write_panel(const Panel& panel, std::ostream& out) {
    nlohmann::json doc;
    auto& cal = doc["calendar"] = nlohmann::json::array();
    for (Day d : panel.calendar) cal.push_back(day_to_string(d));
    auto& ids = doc["series_ids"] = nlohmann::json::array();
    for (const auto& s : panel.series_ids)
        ids.push_back({s.asset_id, series_kind_name(s.kind)});
    auto& data = doc["data"] = nlohmann::json::array();
    auto& mask = doc["mask"] = nlohmann::json::array();
    const std::size_t nd = panel.n_days();
    for (std::size_t r = 0; r < panel.n_series(); ++r) {
        nlohmann::json drow = nlohmann::json::array();
        nlohmann::json mrow = nlohmann::json::array();
        for (std::size_t t = 0; t < nd; ++t) {
            drow.push_back(panel.valid(r, t) ? panel.value(r, t) : 0.0);
            mrow.push_back(panel.valid(r, t) ? 1 : 0);
        }
        data.push_back(std::move(drow));
        mask.push_back(std::move(mrow));
    }
    out << doc.dump() << "\n";
}

Panel read_panel(std::istream& in) {
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("panel document: ") + e.what());
    }
    Panel panel;
    try {
        for (const auto& d : doc.at("calendar"))
            panel.calendar.push_back(day_from_string(d.get<std::string>()));
        for (const auto& s : doc.at("series_ids"))
            panel.series_ids.push_back(
                {s.at(0).get<std::string>(), series_kind_from_name(s.at(1).get<std::string>())});
        const std::size_t nd = panel.calendar.size();
        const auto& data = doc.at("data");
        const auto& mask = doc.at("mask");
        if (data.size() != panel.series_ids.size() || mask.size() != panel.series_ids.size())
            throw ParseError("panel document: row count mismatch");
        for (std::size_t r = 0; r < panel.series_ids.size(); ++r) {
            if (data[r].size() != nd || mask[r].size() != nd)
                throw ParseError("panel document: column count mismatch");
            for (std::size_t t = 0; t < nd; ++t) {
                panel.data.push_back(data[r][t].get<double>());
                panel.mask.push_back(mask[r][t].get<int>() ? 1 : 0);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("panel document: ") + e.what());
    }
    return panel;
}

void save_panel(const Panel& panel, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write '" + path + "'");
    write_panel(panel, out);
}

Panel load_panel(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot read '" + path + "'");
    return read_panel(in);
}

} // namespace cryptonet
