#include "itd/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <json.hpp>

#include "itd/io.hpp"

namespace itd {

using nlohmann::json;

namespace {

const std::set<std::string> kKnownAnalyses = {"durations", "pdf",  "fit-weibull", "fit-qexp",
                                              "intraday",  "dfa",  "dma",         "mfdfa",
                                              "mfdma"};

const std::set<std::string> kKnownKeys = {
    "input",    "sessions", "zero_policy",  "seed",     "threads", "series_source",
    "fill_policy", "period_partition", "analyses", "dfa",     "dma",
    "mfdfa",    "mfdma",    "scales",       "q",        "bins_per_decade", "interval_seconds"};

json parse_config(const std::string& text) {
    json cfg = json::parse(text, nullptr, false);
    if (cfg.is_discarded()) throw UsageError("study config: invalid JSON");
    if (!cfg.is_object()) throw UsageError("study config: top level must be an object");
    for (auto it = cfg.begin(); it != cfg.end(); ++it)
        if (!kKnownKeys.count(it.key()))
            throw UsageError("study config: unknown key '" + it.key() + "'");
    if (!cfg.contains("input") || !cfg["input"].is_object())
        throw UsageError("study config: 'input' object is required");
    if (!cfg["input"].contains("path"))
        throw UsageError("study config: 'input.path' is required");
    if (!cfg.contains("analyses") || !cfg["analyses"].is_array() || cfg["analyses"].empty())
        throw UsageError("study config: 'analyses' must be a non-empty array");
    for (const auto& a : cfg["analyses"]) {
        if (!a.is_string() || !kKnownAnalyses.count(a.get<std::string>()))
            throw UsageError("study config: unknown analysis '" + a.dump() + "'");
    }
    return cfg;
}

struct StudyInput {
    bool is_ticks = false;
    std::vector<TickRecord> ticks;     // when is_ticks
    std::vector<double> series;        // analysis series (raw durations / per-minute / file)
    DurationSeries durations;          // when is_ticks
};

Detrender detrender_from(const json& cfg, const std::string& analysis) {
    if (analysis == "dfa" || analysis == "mfdfa") {
        DfaDetrender d;
        if (cfg.contains(analysis) && cfg[analysis].contains("order"))
            d.order = cfg[analysis]["order"].get<int>();
        return d;
    }
    DmaDetrender d;
    if (cfg.contains(analysis) && cfg[analysis].contains("theta"))
        d.theta = cfg[analysis]["theta"].get<double>();
    return d;
}

}  // namespace

std::string RunManifest::to_json() const {
    json j;
    j["tool_version"] = kToolVersion;
    j["config"] = json::parse(config_json);
    j["input_path"] = input_path;
    j["input_hash"] = input_hash;
    j["analyses"] = json::array();
    for (const auto& a : analyses) {
        json e;
        e["name"] = a.name;
        e["ok"] = a.ok;
        if (!a.error.empty()) e["error"] = a.error;
        e["artifacts"] = a.artifacts;
        j["analyses"].push_back(e);
    }
    return j.dump(2) + "\n";
}

std::vector<std::vector<TickRecord>> partition_periods(const std::vector<TickRecord>& ticks,
                                                       int k) {
    if (k < 2) throw UsageError("partition_periods: k must be >= 2");
    std::vector<std::int32_t> days;
    for (const auto& t : ticks)
        if (days.empty() || t.day != days.back()) days.push_back(t.day);
    if (!std::is_sorted(days.begin(), days.end()))
        throw DataError("partition_periods: ticks not sorted by day");
    if (static_cast<int>(days.size()) < k)
        throw DataError("partition_periods: fewer trading days than partitions");

    const int nd = static_cast<int>(days.size());
    const int base = nd / k, rem = nd % k;
    std::vector<std::vector<TickRecord>> out(static_cast<std::size_t>(k));
    int day_ix = 0;
    std::size_t tick_ix = 0;
    for (int part = 0; part < k; ++part) {
        int take = base + (part < rem ? 1 : 0);
        std::int32_t last_day = days[static_cast<std::size_t>(day_ix + take - 1)];
        while (tick_ix < ticks.size() && ticks[tick_ix].day <= last_day)
            out[static_cast<std::size_t>(part)].push_back(ticks[tick_ix++]);
        day_ix += take;
    }
    return out;
}

RunManifest run_study(const std::string& config_text, const std::filesystem::path& out_dir) {
    json cfg = parse_config(config_text);
    std::filesystem::create_directories(out_dir);

    const std::string input_path = cfg["input"]["path"].get<std::string>();
    const std::string input_format = cfg["input"].value("format", "series");
    SessionConfig sessions;
    if (cfg.contains("sessions")) sessions = SessionConfig::parse(cfg["sessions"].get<std::string>());
    const int threads = cfg.value("threads", 1);
    const ZeroPolicy zero_policy = parse_zero_policy(cfg.value("zero_policy", "include"));
    const int bins_per_decade = cfg.value("bins_per_decade", 10);

    RunManifest manifest;
    manifest.config_json = cfg.dump();
    manifest.input_path = input_path;
    manifest.input_hash = hash_hex(hash_file(input_path));

    StudyInput input;
    if (input_format == "ticks") {
        input.is_ticks = true;
        std::ifstream in(input_path);
        CsvSchema schema;
        if (cfg["input"].contains("schema")) {
            const auto& s = cfg["input"]["schema"];
            schema.date_column = s.value("date", schema.date_column);
            schema.time_column = s.value("time", schema.time_column);
            schema.equity_column = s.value("equity", schema.equity_column);
        }
        ParseReport report;
        input.ticks = parse_ticks(in, schema, sessions, report);
        atomic_write(out_dir / "parse_report.json", parse_report_to_json(report));
        input.durations = extract_durations(input.ticks, sessions);
        const std::string source = cfg.value("series_source", "raw");
        if (source == "per_minute")
            input.series = aggregate_per_minute(input.ticks, sessions,
                                                parse_fill_policy(cfg.value("fill_policy",
                                                                            "previous")));
        else if (source == "raw")
            input.series = input.durations.values;
        else
            throw UsageError("study config: series_source must be raw or per_minute");
    } else if (input_format == "series") {
        input.series = load_series(input_path);
        input.durations.values = input.series;
    } else {
        throw UsageError("study config: input.format must be ticks or series");
    }

    auto run_one = [&](const std::string& name) {
        AnalysisStatus status;
        status.name = name;
        try {
            auto emit = [&](const std::string& filename, const std::string& content) {
                atomic_write(out_dir / filename, content);
                status.artifacts.push_back(filename);
            };
            if (name == "durations") {
                emit("durations.csv", duration_series_to_csv(input.durations));
            } else if (name == "pdf") {
                int parts = cfg.value("period_partition", 1);
                if (parts > 1) {
                    if (!input.is_ticks)
                        throw UsageError("period_partition requires tick input");
                    auto periods = partition_periods(input.ticks, parts);
                    for (std::size_t p = 0; p < periods.size(); ++p) {
                        auto d = extract_durations(periods[p], sessions);
                        auto pdf = log_binned_pdf(scale_by_std(d.values, zero_policy),
                                                  bins_per_decade);
                        emit("pdf_period" + std::to_string(p + 1) + ".csv", pdf_to_csv(pdf));
                    }
                } else {
                    auto pdf = log_binned_pdf(scale_by_std(input.durations.values, zero_policy),
                                              bins_per_decade);
                    emit("pdf.csv", pdf_to_csv(pdf));
                }
            } else if (name == "fit-weibull") {
                auto sample = scale_by_std(input.durations.values, zero_policy);
                auto fit = fit_weibull_mle(sample);
                emit("fit_weibull.json",
                     weibull_fit_to_json(fit, hash_series(input.durations.values), zero_policy));
            } else if (name == "fit-qexp") {
                auto sample = scale_by_std(input.durations.values, zero_policy);
                auto fit = fit_qexp_nls(log_binned_pdf(sample, bins_per_decade));
                emit("fit_qexp.json",
                     qexp_fit_to_json(fit, hash_series(input.durations.values)));
            } else if (name == "intraday") {
                if (!input.is_ticks) throw UsageError("intraday requires tick input");
                auto pattern = intraday_pattern(input.ticks, sessions,
                                                cfg.value("interval_seconds", 1), zero_policy);
                emit("intraday.csv", pattern_to_csv(pattern));
            } else if (name == "dfa" || name == "dma") {
                auto grid = default_scale_grid(input.series.size());
                auto curve = estimate_hurst(input.series, grid, detrender_from(cfg, name),
                                            threads);
                emit(name + "_curve.csv", curve_to_csv(curve));
                emit(name + "_fit.json", curve_to_json(curve));
            } else if (name == "mfdfa" || name == "mfdma") {
                auto grid = default_scale_grid(input.series.size());
                auto res = generalized_hurst(input.series, grid, default_q_grid(),
                                             detrender_from(cfg, name), threads);
                emit(name + ".csv", mf_result_to_csv(res));
                emit(name + ".json", mf_result_to_json(res));
                emit(name + "_spectrum.csv", spectrum_to_csv(res));
            }
            status.ok = true;
        } catch (const std::exception& e) {
            status.ok = false;
            status.error = e.what();
        }
        manifest.analyses.push_back(std::move(status));
    };

    for (const auto& a : cfg["analyses"]) run_one(a.get<std::string>());

    atomic_write(out_dir / "manifest.json", manifest.to_json());
    return manifest;
}

RunManifest run_study_file(const std::filesystem::path& config_path,
                           const std::filesystem::path& out_dir) {
    std::ifstream in(config_path);
    if (!in) throw DataError("cannot read config " + config_path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return run_study(text, out_dir);
}

}  // namespace itd
