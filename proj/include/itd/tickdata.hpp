#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "itd/common.hpp"

namespace itd {

/// One trade record. `day` is a serial day number (days since 1970-01-01)
/// so that sorting by (day, time_of_day) is a plain integer comparison;
/// `time_of_day` is seconds since midnight at 1 s resolution.
struct TickRecord {
    std::int32_t day = 0;
    std::int32_t time_of_day = 0;
    std::string equity_id;
};

/// Continuous-auction sessions as disjoint, ordered [open, close) intervals
/// in seconds-of-day. Defaults to SHSE hours.
struct SessionConfig {
    std::vector<std::pair<int, int>> sessions{{34200, 41400}, {46800, 54000}};

    /// Index of the session containing t, or -1.
    int session_index(int second_of_day) const;
    bool contains(int second_of_day) const { return session_index(second_of_day) >= 0; }
    int total_seconds() const;

    /// Offset of t within the concatenated session timeline, or -1.
    int session_offset(int second_of_day) const;

    void validate() const;

    /// Parse "34200-41400,46800-54000".
    static SessionConfig parse(const std::string& text);
};

struct DurationSeries {
    std::vector<double> values;  // integer seconds, stored as double
    std::string equity_id;
    int day_count = 0;
    std::size_t trade_count = 0;
    bool empty_input = false;
};

struct CsvSchema {
    std::string date_column = "date";
    std::string time_column = "time";
    std::string equity_column = "equity";
    char delimiter = ',';
};

struct ParseReport {
    std::size_t total_rows = 0;
    std::size_t accepted = 0;
    std::size_t malformed = 0;
    std::size_t out_of_session = 0;
    std::vector<std::string> row_errors;  // "line N: message", capped
};

/// Parse delimited tick data with a header row. Rows that fail to parse are
/// counted (with line numbers) rather than silently dropped; rows whose time
/// falls outside the configured sessions are counted separately. Output is
/// sorted by (equity, day, time).
std::vector<TickRecord> parse_ticks(std::istream& source, const CsvSchema& schema,
                                    const SessionConfig& cfg, ParseReport& report);

/// Intertrade durations for one equity: t2 - t1 for consecutive trades in
/// the same session of the same day. Nothing is emitted across the lunch
/// break or overnight.
DurationSeries extract_durations(const std::vector<TickRecord>& ticks,
                                 const SessionConfig& cfg);

double zero_fraction(const DurationSeries& series);

enum class FillPolicy { Previous, Skip, Zero };

FillPolicy parse_fill_policy(const std::string& name);

/// Mean duration per 60 s session interval per day; a duration belongs to
/// the minute containing its terminating trade. With FillPolicy::Previous or
/// Zero the series length is fixed at (session minutes) x (day count).
std::vector<double> aggregate_per_minute(const std::vector<TickRecord>& ticks,
                                         const SessionConfig& cfg,
                                         FillPolicy policy = FillPolicy::Previous);

/// "2005-08-22" -> serial day; throws DataError on malformed input.
std::int32_t parse_iso_date(const std::string& s);

/// "09:30:01" -> 34201; throws DataError on malformed input.
std::int32_t parse_hms(const std::string& s);

std::string format_iso_date(std::int32_t serial_day);

}  // namespace itd
