#pragma once

#include <vector>

#include "itd/stats_core.hpp"
#include "itd/tickdata.hpp"

namespace itd {

/// Mean intertrade duration per fixed interval of the trading day, averaged
/// across days. Intervals with no contributing day have support 0 and a
/// NaN mean.
struct IntradayPattern {
    int interval_seconds = 1;
    std::vector<int> second_of_day;    // start second of each interval
    std::vector<double> mean_duration; // <tau>_j
    std::vector<int> support;          // days contributing to interval j
    int day_count = 0;
};

/// Per-day interval means, then an average over the days where the interval
/// has at least one duration. A duration is attributed to the interval
/// containing its terminating trade. interval_seconds must divide every
/// session length.
IntradayPattern intraday_pattern(const std::vector<TickRecord>& ticks, const SessionConfig& cfg,
                                 int interval_seconds = 1,
                                 ZeroPolicy policy = ZeroPolicy::Include);

}  // namespace itd
