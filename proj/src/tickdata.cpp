#include "itd/tickdata.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <sstream>

namespace itd {

namespace {

constexpr std::size_t kMaxRowErrors = 50;

bool parse_int(std::string_view sv, int& out) {
    auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), out);
    return ec == std::errc{} && ptr == sv.data() + sv.size();
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t pos = line.find(delim, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

void strip_cr(std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
}

}  // namespace

int SessionConfig::session_index(int t) const {
    for (std::size_t k = 0; k < sessions.size(); ++k)
        if (t >= sessions[k].first && t < sessions[k].second) return static_cast<int>(k);
    return -1;
}

int SessionConfig::total_seconds() const {
    int total = 0;
    for (auto& [open, close] : sessions) total += close - open;
    return total;
}

int SessionConfig::session_offset(int t) const {
    int offset = 0;
    for (auto& [open, close] : sessions) {
        if (t >= open && t < close) return offset + (t - open);
        offset += close - open;
    }
    return -1;
}

void SessionConfig::validate() const {
    if (sessions.empty()) throw UsageError("session config: no sessions");
    int prev_close = -1;
    for (auto& [open, close] : sessions) {
        if (open < 0 || close > 86400 || open >= close)
            throw UsageError("session config: bad interval");
        if (open < prev_close) throw UsageError("session config: overlapping sessions");
        prev_close = close;
    }
}

SessionConfig SessionConfig::parse(const std::string& text) {
    SessionConfig cfg;
    cfg.sessions.clear();
    for (const auto& part : split(text, ',')) {
        auto dash = part.find('-');
        int open = 0, close = 0;
        if (dash == std::string::npos || !parse_int(std::string_view(part).substr(0, dash), open) ||
            !parse_int(std::string_view(part).substr(dash + 1), close))
            throw UsageError("cannot parse session interval '" + part + "'");
        cfg.sessions.emplace_back(open, close);
    }
    cfg.validate();
    return cfg;
}

std::int32_t parse_iso_date(const std::string& s) {
    int y = 0, m = 0, d = 0;
    if (s.size() != 10 || s[4] != '-' || s[7] != '-' ||
        !parse_int(std::string_view(s).substr(0, 4), y) ||
        !parse_int(std::string_view(s).substr(5, 2), m) ||
        !parse_int(std::string_view(s).substr(8, 2), d) || m < 1 || m > 12 || d < 1 || d > 31)
        throw DataError("malformed date '" + s + "'");
    // days-from-civil (Howard Hinnant's algorithm)
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int>(doe) - 719468;
}

std::string format_iso_date(std::int32_t z) {
    z += 719468;
    const int era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int y = static_cast<int>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : static_cast<unsigned>(-9));
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", y + (m <= 2), m, d);
    return buf;
}

std::int32_t parse_hms(const std::string& s) {
    int h = 0, m = 0, sec = 0;
    if (s.size() != 8 || s[2] != ':' || s[5] != ':' ||
        !parse_int(std::string_view(s).substr(0, 2), h) ||
        !parse_int(std::string_view(s).substr(3, 2), m) ||
        !parse_int(std::string_view(s).substr(6, 2), sec) || h > 23 || m > 59 || sec > 59)
        throw DataError("malformed time '" + s + "'");
    return h * 3600 + m * 60 + sec;
}

std::vector<TickRecord> parse_ticks(std::istream& source, const CsvSchema& schema,
                                    const SessionConfig& cfg, ParseReport& report) {
    cfg.validate();
    if (!source) throw DataError("unreadable tick stream");

    std::string line;
    if (!std::getline(source, line)) throw DataError("tick stream has no header row");
    strip_cr(line);
    auto header = split(line, schema.delimiter);
    int date_ix = -1, time_ix = -1, equity_ix = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == schema.date_column) date_ix = static_cast<int>(i);
        if (header[i] == schema.time_column) time_ix = static_cast<int>(i);
        if (header[i] == schema.equity_column) equity_ix = static_cast<int>(i);
    }
    if (date_ix < 0) throw DataError("schema column missing: " + schema.date_column);
    if (time_ix < 0) throw DataError("schema column missing: " + schema.time_column);
    if (equity_ix < 0) throw DataError("schema column missing: " + schema.equity_column);

    std::vector<TickRecord> records;
    std::size_t lineno = 1;
    while (std::getline(source, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        ++report.total_rows;
        auto fields = split(line, schema.delimiter);
        const std::size_t need =
            static_cast<std::size_t>(std::max({date_ix, time_ix, equity_ix})) + 1;
        try {
            if (fields.size() < need) throw DataError("too few columns");
            TickRecord rec;
            rec.day = parse_iso_date(fields[static_cast<std::size_t>(date_ix)]);
            rec.time_of_day = parse_hms(fields[static_cast<std::size_t>(time_ix)]);
            rec.equity_id = fields[static_cast<std::size_t>(equity_ix)];
            if (!cfg.contains(rec.time_of_day)) {
                ++report.out_of_session;
                continue;
            }
            records.push_back(std::move(rec));
            ++report.accepted;
        } catch (const DataError& e) {
            ++report.malformed;
            if (report.row_errors.size() < kMaxRowErrors)
                report.row_errors.push_back("line " + std::to_string(lineno) + ": " + e.what());
        }
    }

    std::stable_sort(records.begin(), records.end(), [](const TickRecord& a, const TickRecord& b) {
        if (a.equity_id != b.equity_id) return a.equity_id < b.equity_id;
        if (a.day != b.day) return a.day < b.day;
        return a.time_of_day < b.time_of_day;
    });
    return records;
}

DurationSeries extract_durations(const std::vector<TickRecord>& ticks, const SessionConfig& cfg) {
    cfg.validate();
    DurationSeries out;
    if (ticks.empty()) {
        out.empty_input = true;
        return out;
    }
    out.equity_id = ticks.front().equity_id;
    out.trade_count = ticks.size();

    int prev_day = -1, prev_time = -1, prev_session = -1;
    int days = 0;
    for (const auto& t : ticks) {
        if (t.equity_id != out.equity_id)
            throw DataError("extract_durations: mixed equities in input");
        int sess = cfg.session_index(t.time_of_day);
        if (sess < 0) throw DataError("extract_durations: tick outside sessions");
        if (t.day < prev_day || (t.day == prev_day && t.time_of_day < prev_time))
            throw DataError("extract_durations: input not sorted by (day, time)");
        if (t.day != prev_day) ++days;
        if (t.day == prev_day && sess == prev_session)
            out.values.push_back(static_cast<double>(t.time_of_day - prev_time));
        prev_day = t.day;
        prev_time = t.time_of_day;
        prev_session = sess;
    }
    out.day_count = days;
    return out;
}

double zero_fraction(const DurationSeries& series) {
    if (series.values.empty()) throw DataError("zero_fraction: empty series");
    std::size_t zeros = 0;
    for (double v : series.values) zeros += (v == 0.0);
    return static_cast<double>(zeros) / static_cast<double>(series.values.size());
}

FillPolicy parse_fill_policy(const std::string& name) {
    if (name == "previous") return FillPolicy::Previous;
    if (name == "skip") return FillPolicy::Skip;
    if (name == "zero") return FillPolicy::Zero;
    throw UsageError("unknown fill policy '" + name + "'");
}

std::vector<double> aggregate_per_minute(const std::vector<TickRecord>& ticks,
                                         const SessionConfig& cfg, FillPolicy policy) {
    cfg.validate();
    if (ticks.empty()) throw DataError("aggregate_per_minute: empty input");
    if (cfg.total_seconds() % 60 != 0)
        throw UsageError("aggregate_per_minute: sessions are not whole minutes");
    const int minutes_per_day = cfg.total_seconds() / 60;

    // Per (day, minute) sums of durations terminating in that minute.
    struct DayAgg {
        std::vector<double> sum;
        std::vector<int> count;
    };
    std::vector<std::int32_t> day_ids;
    std::vector<DayAgg> days;

    int prev_day = -1, prev_time = -1, prev_session = -1;
    for (const auto& t : ticks) {
        int sess = cfg.session_index(t.time_of_day);
        if (sess < 0) throw DataError("aggregate_per_minute: tick outside sessions");
        if (t.day < prev_day || (t.day == prev_day && t.time_of_day < prev_time))
            throw DataError("aggregate_per_minute: input not sorted");
        if (days.empty() || t.day != day_ids.back()) {
            day_ids.push_back(t.day);
            days.push_back({std::vector<double>(static_cast<std::size_t>(minutes_per_day), 0.0),
                            std::vector<int>(static_cast<std::size_t>(minutes_per_day), 0)});
        }
        if (t.day == prev_day && sess == prev_session) {
            int offset = cfg.session_offset(t.time_of_day);
            auto minute = static_cast<std::size_t>(offset / 60);
            days.back().sum[minute] += static_cast<double>(t.time_of_day - prev_time);
            days.back().count[minute] += 1;
        }
        prev_day = t.day;
        prev_time = t.time_of_day;
        prev_session = sess;
    }

    std::vector<double> out;
    double last = 0.0;
    for (const auto& day : days) {
        for (int j = 0; j < minutes_per_day; ++j) {
            auto ju = static_cast<std::size_t>(j);
            if (day.count[ju] > 0) {
                last = day.sum[ju] / day.count[ju];
                out.push_back(last);
            } else {
                switch (policy) {
                    case FillPolicy::Previous: out.push_back(last); break;
                    case FillPolicy::Zero: out.push_back(0.0); break;
                    case FillPolicy::Skip: break;
                }
            }
        }
    }
    return out;
}

}  // namespace itd
