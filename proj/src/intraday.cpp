#include "itd/intraday.hpp"

#include <cmath>
#include <limits>

namespace itd {

IntradayPattern intraday_pattern(const std::vector<TickRecord>& ticks, const SessionConfig& cfg,
                                 int interval_seconds, ZeroPolicy policy) {
    cfg.validate();
    if (interval_seconds < 1) throw UsageError("intraday_pattern: interval must be >= 1 s");
    for (auto& [open, close] : cfg.sessions)
        if ((close - open) % interval_seconds != 0)
            throw UsageError("intraday_pattern: interval does not tile a session");
    if (ticks.empty()) throw DataError("intraday_pattern: empty input");

    const int total = cfg.total_seconds();
    const auto intervals = static_cast<std::size_t>(total / interval_seconds);

    // Accumulate per-day interval means in fixed day order (deterministic).
    std::vector<double> pattern_sum(intervals, 0.0);
    std::vector<int> pattern_support(intervals, 0);
    std::vector<double> day_sum(intervals, 0.0);
    std::vector<int> day_count_per_interval(intervals, 0);

    auto flush_day = [&] {
        for (std::size_t j = 0; j < intervals; ++j) {
            if (day_count_per_interval[j] > 0) {
                pattern_sum[j] += day_sum[j] / day_count_per_interval[j];
                pattern_support[j] += 1;
            }
            day_sum[j] = 0.0;
            day_count_per_interval[j] = 0;
        }
    };

    int prev_day = -1, prev_time = -1, prev_session = -1;
    int days = 0;
    for (const auto& t : ticks) {
        int sess = cfg.session_index(t.time_of_day);
        if (sess < 0) throw DataError("intraday_pattern: tick outside sessions");
        if (t.day < prev_day || (t.day == prev_day && t.time_of_day < prev_time))
            throw DataError("intraday_pattern: input not sorted");
        if (t.day != prev_day) {
            if (prev_day != -1) flush_day();
            ++days;
        }
        if (t.day == prev_day && sess == prev_session) {
            double tau = t.time_of_day - prev_time;
            if (!(policy == ZeroPolicy::Exclude && tau == 0.0)) {
                auto j = static_cast<std::size_t>(cfg.session_offset(t.time_of_day) /
                                                  interval_seconds);
                day_sum[j] += tau;
                day_count_per_interval[j] += 1;
            }
        }
        prev_day = t.day;
        prev_time = t.time_of_day;
        prev_session = sess;
    }
    flush_day();

    IntradayPattern out;
    out.interval_seconds = interval_seconds;
    out.day_count = days;
    out.second_of_day.reserve(intervals);
    for (auto& [open, close] : cfg.sessions)
        for (int t = open; t < close; t += interval_seconds) out.second_of_day.push_back(t);
    out.mean_duration.resize(intervals);
    out.support = pattern_support;
    for (std::size_t j = 0; j < intervals; ++j)
        out.mean_duration[j] = pattern_support[j] > 0
                                   ? pattern_sum[j] / pattern_support[j]
                                   : std::numeric_limits<double>::quiet_NaN();
    return out;
}

}  // namespace itd
