// Command-line front end: every subcommand reads/writes plain CSV/JSON so
// plotting and downstream work can be done with external tools.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "itd/io.hpp"
#include "itd/pipeline.hpp"
#include "itd/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOpts {
    std::string out_dir = ".";
    std::uint64_t seed = 42;
    int threads = 1;
    std::string config;
};

struct TickOpts {
    std::string input;
    std::string date_col = "date", time_col = "time", equity_col = "equity";
    std::string sessions = "34200-41400,46800-54000";
};

void add_tick_opts(CLI::App* cmd, TickOpts& o) {
    cmd->add_option("--input", o.input, "tick CSV file")->required();
    cmd->add_option("--date-col", o.date_col, "date column name");
    cmd->add_option("--time-col", o.time_col, "time column name");
    cmd->add_option("--equity-col", o.equity_col, "equity id column name");
    cmd->add_option("--sessions", o.sessions, "session intervals, e.g. 34200-41400,46800-54000");
}

std::vector<itd::TickRecord> load_ticks(const TickOpts& o, const itd::SessionConfig& cfg,
                                        itd::ParseReport& report) {
    std::ifstream in(o.input);
    if (!in) throw itd::DataError("cannot read " + o.input);
    itd::CsvSchema schema;
    schema.date_column = o.date_col;
    schema.time_column = o.time_col;
    schema.equity_column = o.equity_col;
    return itd::parse_ticks(in, schema, cfg, report);
}

void write_artifact(const GlobalOpts& g, const std::string& name, const std::string& content) {
    fs::create_directories(g.out_dir);
    itd::atomic_write(fs::path(g.out_dir) / name, content);
    std::cout << (fs::path(g.out_dir) / name).string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"intertrade duration analysis toolkit"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--out-dir", g.out_dir, "artifact output directory");
    app.add_option("--seed", g.seed, "RNG seed for stochastic subcommands");
    app.add_option("--threads", g.threads, "worker threads for scale sweeps");
    app.add_option("--config", g.config, "study configuration file");

    TickOpts ingest_o, durations_o, intraday_o;
    std::string input, output, kind = "fgn", zero_policy = "include", fill = "previous";
    bool per_minute = false, from_pdf = false;
    int bins_per_decade = 10, interval_seconds = 1, order = 1, s_min = 20, scale_count = 30;
    int cascade_depth = 16;
    double theta = 0.0, hurst = 0.5, cascade_p = 0.3, rate = 1.0;
    double w_alpha = 1.0, w_beta = 1.0, q_g0 = 1.0, q_gamma = 3.0;
    double q_min = -4.0, q_max = 4.0, q_step = 0.2;
    std::size_t length = 1 << 20;

    auto* ingest = app.add_subcommand("ingest", "parse and sort tick data, report bad rows");
    add_tick_opts(ingest, ingest_o);

    auto* durations = app.add_subcommand("durations", "intertrade durations from tick data");
    add_tick_opts(durations, durations_o);
    durations->add_flag("--per-minute", per_minute, "emit 1-min mean-duration series");
    durations->add_option("--fill", fill, "empty-minute policy: previous|skip|zero");

    auto* pdf_cmd = app.add_subcommand("pdf", "log-binned empirical density of scaled durations");
    pdf_cmd->add_option("--input", input, "duration series CSV")->required();
    pdf_cmd->add_option("--zero-policy", zero_policy, "include|exclude zeros");
    pdf_cmd->add_option("--bins-per-decade", bins_per_decade, "log bins per decade");

    auto* fitw = app.add_subcommand("fit-weibull", "Weibull fit by maximum likelihood");
    fitw->add_option("--input", input, "duration series CSV")->required();
    fitw->add_option("--zero-policy", zero_policy, "include|exclude zeros");

    auto* fitq = app.add_subcommand("fit-qexp", "shifted power-law fit by least squares");
    fitq->add_option("--input", input, "duration series CSV (or pdf CSV with --from-pdf)")
        ->required();
    fitq->add_flag("--from-pdf", from_pdf, "input is a pdf CSV instead of a series");
    fitq->add_option("--zero-policy", zero_policy, "include|exclude zeros");
    fitq->add_option("--bins-per-decade", bins_per_decade, "log bins per decade");

    auto* intra = app.add_subcommand("intraday", "intraday mean-duration pattern");
    add_tick_opts(intra, intraday_o);
    intra->add_option("--interval", interval_seconds, "interval length in seconds");
    intra->add_option("--zero-policy", zero_policy, "include|exclude zeros");

    auto* dfa = app.add_subcommand("dfa", "detrended fluctuation analysis");
    dfa->add_option("--input", input, "series CSV")->required();
    dfa->add_option("--order", order, "detrending polynomial order (1-3)");
    dfa->add_option("--s-min", s_min, "smallest scale");
    dfa->add_option("--scales", scale_count, "number of scales");

    auto* dma = app.add_subcommand("dma", "detrending moving average analysis");
    dma->add_option("--input", input, "series CSV")->required();
    dma->add_option("--theta", theta, "position parameter (0 back, 0.5 centered, 1 forward)");
    dma->add_option("--s-min", s_min, "smallest scale");
    dma->add_option("--scales", scale_count, "number of scales");

    auto add_mf_opts = [&](CLI::App* cmd) {
        cmd->add_option("--input", input, "series CSV")->required();
        cmd->add_option("--s-min", s_min, "smallest scale");
        cmd->add_option("--scales", scale_count, "number of scales");
        cmd->add_option("--q-min", q_min, "lowest moment order");
        cmd->add_option("--q-max", q_max, "highest moment order");
        cmd->add_option("--q-step", q_step, "moment order step");
    };
    auto* mfdfa = app.add_subcommand("mfdfa", "multifractal DFA");
    add_mf_opts(mfdfa);
    mfdfa->add_option("--order", order, "detrending polynomial order (1-3)");
    auto* mfdma = app.add_subcommand("mfdma", "multifractal DMA");
    add_mf_opts(mfdma);
    mfdma->add_option("--theta", theta, "position parameter");

    auto* spectrum = app.add_subcommand("spectrum", "plot-ready f(alpha) from an mf result CSV");
    spectrum->add_option("--input", input, "mfdfa/mfdma result CSV")->required();

    auto* shuffle = app.add_subcommand("shuffle", "seeded uniform permutation of a series");
    shuffle->add_option("--input", input, "series CSV")->required();

    auto* generate = app.add_subcommand("generate", "synthetic series with known properties");
    generate->add_option("--kind", kind,
                         "fgn|cascade|iid-gaussian|iid-exponential|iid-weibull|iid-qexp");
    generate->add_option("--length", length, "series length");
    generate->add_option("--hurst", hurst, "fGn target Hurst exponent");
    generate->add_option("--p", cascade_p, "cascade weight");
    generate->add_option("--depth", cascade_depth, "cascade depth k (length 2^k)");
    generate->add_option("--rate", rate, "exponential rate");
    generate->add_option("--alpha", w_alpha, "Weibull alpha");
    generate->add_option("--beta", w_beta, "Weibull beta");
    generate->add_option("--g0", q_g0, "shifted power law g0");
    generate->add_option("--gamma", q_gamma, "shifted power law gamma");

    auto* study = app.add_subcommand("study", "run a full configured study");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*ingest) {
            auto sessions = itd::SessionConfig::parse(ingest_o.sessions);
            itd::ParseReport report;
            auto ticks = load_ticks(ingest_o, sessions, report);
            std::string csv = "date,time,equity\n";
            for (const auto& t : ticks) {
                char hms[16];
                std::snprintf(hms, sizeof hms, "%02d:%02d:%02d", t.time_of_day / 3600,
                              (t.time_of_day / 60) % 60, t.time_of_day % 60);
                csv += itd::format_iso_date(t.day) + "," + hms + "," + t.equity_id + "\n";
            }
            write_artifact(g, "ticks_sorted.csv", csv);
            write_artifact(g, "parse_report.json", itd::parse_report_to_json(report));
        } else if (*durations) {
            auto sessions = itd::SessionConfig::parse(durations_o.sessions);
            itd::ParseReport report;
            auto ticks = load_ticks(durations_o, sessions, report);
            if (per_minute) {
                auto series =
                    itd::aggregate_per_minute(ticks, sessions, itd::parse_fill_policy(fill));
                write_artifact(g, "durations_1min.csv",
                               itd::series_to_csv(series, {{"fill", fill}}));
            } else {
                auto d = itd::extract_durations(ticks, sessions);
                write_artifact(g, "durations.csv", itd::duration_series_to_csv(d));
            }
        } else if (*pdf_cmd) {
            auto values = itd::load_series(input);
            auto sample = itd::scale_by_std(values, itd::parse_zero_policy(zero_policy));
            write_artifact(g, "pdf.csv", itd::pdf_to_csv(itd::log_binned_pdf(sample,
                                                                             bins_per_decade)));
        } else if (*fitw) {
            auto values = itd::load_series(input);
            auto policy = itd::parse_zero_policy(zero_policy);
            auto fit = itd::fit_weibull_mle(itd::scale_by_std(values, policy));
            write_artifact(g, "fit_weibull.json",
                           itd::weibull_fit_to_json(fit, itd::hash_series(values), policy));
        } else if (*fitq) {
            itd::EmpiricalPdf pdf;
            std::uint64_t hash = 0;
            if (from_pdf) {
                std::ifstream in(input);
                if (!in) throw itd::DataError("cannot read " + input);
                pdf = itd::pdf_from_csv(in);
                hash = itd::hash_file(input);
            } else {
                auto values = itd::load_series(input);
                hash = itd::hash_series(values);
                pdf = itd::log_binned_pdf(
                    itd::scale_by_std(values, itd::parse_zero_policy(zero_policy)),
                    bins_per_decade);
            }
            write_artifact(g, "fit_qexp.json", itd::qexp_fit_to_json(itd::fit_qexp_nls(pdf),
                                                                     hash));
        } else if (*intra) {
            auto sessions = itd::SessionConfig::parse(intraday_o.sessions);
            itd::ParseReport report;
            auto ticks = load_ticks(intraday_o, sessions, report);
            auto pattern = itd::intraday_pattern(ticks, sessions, interval_seconds,
                                                 itd::parse_zero_policy(zero_policy));
            write_artifact(g, "intraday.csv", itd::pattern_to_csv(pattern));
        } else if (*dfa || *dma) {
            auto values = itd::load_series(input);
            auto grid = itd::default_scale_grid(values.size(), s_min, scale_count);
            itd::Detrender d;
            std::string prefix;
            if (*dfa) {
                d = itd::DfaDetrender{order};
                prefix = "dfa";
            } else {
                d = itd::DmaDetrender{theta};
                prefix = "dma";
            }
            auto curve = itd::estimate_hurst(values, grid, d, g.threads);
            write_artifact(g, prefix + "_curve.csv", itd::curve_to_csv(curve));
            write_artifact(g, prefix + "_fit.json", itd::curve_to_json(curve));
        } else if (*mfdfa || *mfdma) {
            auto values = itd::load_series(input);
            auto grid = itd::default_scale_grid(values.size(), s_min, scale_count);
            std::vector<double> qs;
            for (double q = q_min; q <= q_max + 1e-9; q += q_step)
                qs.push_back(std::abs(q) < 1e-9 ? 0.0 : q);
            itd::Detrender d;
            std::string prefix;
            if (*mfdfa) {
                d = itd::DfaDetrender{order};
                prefix = "mfdfa";
            } else {
                d = itd::DmaDetrender{theta};
                prefix = "mfdma";
            }
            auto res = itd::generalized_hurst(values, grid, qs, d, g.threads);
            write_artifact(g, prefix + ".csv", itd::mf_result_to_csv(res));
            write_artifact(g, prefix + ".json", itd::mf_result_to_json(res));
            write_artifact(g, prefix + "_spectrum.csv", itd::spectrum_to_csv(res));
        } else if (*spectrum) {
            std::ifstream in(input);
            if (!in) throw itd::DataError("cannot read " + input);
            auto res = itd::mf_result_from_csv(in);
            write_artifact(g, "spectrum.csv", itd::spectrum_to_csv(res));
        } else if (*shuffle) {
            auto values = itd::load_series(input);
            write_artifact(g, "shuffled.csv",
                           itd::series_to_csv(itd::shuffled(values, g.seed),
                                              {{"seed", std::to_string(g.seed)}}));
        } else if (*generate) {
            std::vector<double> series;
            json spec;
            spec["kind"] = kind;
            spec["seed"] = g.seed;
            if (kind == "fgn") {
                series = itd::gen_fgn(hurst, length, g.seed);
                spec["hurst"] = hurst;
                spec["length"] = length;
            } else if (kind == "cascade") {
                series = itd::gen_binomial_cascade(cascade_p, cascade_depth);
                spec["p"] = cascade_p;
                spec["depth"] = cascade_depth;
            } else if (kind == "iid-gaussian") {
                series = itd::gen_iid_gaussian(length, g.seed);
                spec["length"] = length;
            } else if (kind == "iid-exponential") {
                series = itd::gen_iid_exponential(rate, length, g.seed);
                spec["rate"] = rate;
                spec["length"] = length;
            } else if (kind == "iid-weibull") {
                series = itd::gen_iid_weibull(w_alpha, w_beta, length, g.seed);
                spec["alpha"] = w_alpha;
                spec["beta"] = w_beta;
                spec["length"] = length;
            } else if (kind == "iid-qexp") {
                series = itd::gen_iid_qexp(q_g0, q_gamma, length, g.seed);
                spec["g0"] = q_g0;
                spec["gamma"] = q_gamma;
                spec["length"] = length;
            } else {
                throw itd::UsageError("generate: unknown kind '" + kind + "'");
            }
            write_artifact(g, "generated.csv", itd::series_to_csv(series, {{"spec", spec.dump()}}));
        } else if (*study) {
            if (g.config.empty()) throw itd::UsageError("study requires --config");
            auto manifest = itd::run_study_file(g.config, g.out_dir);
            std::cout << (fs::path(g.out_dir) / "manifest.json").string() << "\n";
            for (const auto& a : manifest.analyses)
                if (!a.ok) std::cerr << "analysis " << a.name << " failed: " << a.error << "\n";
        }
    } catch (const itd::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const itd::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const itd::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
