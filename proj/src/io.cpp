#include "itd/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace itd {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw DataError("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::uint64_t hash_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[65536];
    while (in.read(buf, sizeof buf) || in.gcount() > 0)
        h = fnv1a64(buf, static_cast<std::size_t>(in.gcount()), h);
    return h;
}

std::string series_to_csv(const std::vector<double>& values,
                          const std::map<std::string, std::string>& metadata) {
    std::string out;
    for (const auto& [k, v] : metadata) out += "# " + k + "=" + v + "\n";
    out += "value\n";
    for (double v : values) out += format_double(v) + "\n";
    return out;
}

std::vector<double> series_from_csv(std::istream& in) {
    std::vector<double> values;
    std::string line;
    bool header_seen = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            // Tolerate headerless one-column files: skip the line only when
            // it does not parse as a number.
            double v;
            auto [p, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
            if (ec != std::errc{} || p != line.data() + line.size()) continue;
        }
        double v;
        auto [p, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
        if (ec != std::errc{} || p != line.data() + line.size())
            throw DataError("series csv: bad value at line " + std::to_string(lineno));
        values.push_back(v);
    }
    return values;
}

std::vector<double> load_series(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read " + path.string());
    return series_from_csv(in);
}

std::string duration_series_to_csv(const DurationSeries& series) {
    std::map<std::string, std::string> meta;
    meta["equity"] = series.equity_id;
    meta["days"] = std::to_string(series.day_count);
    meta["trades"] = std::to_string(series.trade_count);
    return series_to_csv(series.values, meta);
}

std::string pdf_to_csv(const EmpiricalPdf& pdf) {
    std::string out = "# atom_mass=" + format_double(pdf.atom_mass) + "\n";
    out += "# n=" + std::to_string(pdf.n) + "\n";
    out += "bin_center,density,bin_width\n";
    for (std::size_t i = 0; i < pdf.bin_centers.size(); ++i)
        out += format_double(pdf.bin_centers[i]) + "," + format_double(pdf.densities[i]) + "," +
               format_double(pdf.bin_widths[i]) + "\n";
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_double_field(const std::string& s, const char* what) {
    double v;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw DataError(std::string("bad ") + what + " field '" + s + "'");
    return v;
}

}  // namespace

EmpiricalPdf pdf_from_csv(std::istream& in) {
    EmpiricalPdf pdf;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto eq = line.find('=');
            if (eq != std::string::npos) {
                auto key = line.substr(2, eq - 2);
                auto value = line.substr(eq + 1);
                if (key == "atom_mass") pdf.atom_mass = parse_double_field(value, "atom_mass");
                if (key == "n") pdf.n = static_cast<std::size_t>(std::stoull(value));
            }
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        auto fields = split_csv_line(line);
        if (fields.size() < 3) throw DataError("pdf csv: expected 3 columns");
        pdf.bin_centers.push_back(parse_double_field(fields[0], "bin_center"));
        pdf.densities.push_back(parse_double_field(fields[1], "density"));
        pdf.bin_widths.push_back(parse_double_field(fields[2], "bin_width"));
    }
    return pdf;
}

std::string pattern_to_csv(const IntradayPattern& pattern) {
    std::string out = "# interval_seconds=" + std::to_string(pattern.interval_seconds) + "\n";
    out += "# days=" + std::to_string(pattern.day_count) + "\n";
    out += "second_of_day,mean_duration,support\n";
    for (std::size_t j = 0; j < pattern.second_of_day.size(); ++j)
        out += std::to_string(pattern.second_of_day[j]) + "," +
               (pattern.support[j] > 0 ? format_double(pattern.mean_duration[j]) : "nan") + "," +
               std::to_string(pattern.support[j]) + "\n";
    return out;
}

std::string curve_to_csv(const FluctuationCurve& curve) {
    std::string out = "s,F\n";
    for (std::size_t k = 0; k < curve.scales.size(); ++k)
        out += std::to_string(curve.scales[k]) + "," + format_double(curve.F[k]) + "\n";
    return out;
}

std::string curve_to_json(const FluctuationCurve& curve) {
    json j;
    j["H"] = curve.H;
    j["H_ci"] = curve.H_ci;
    j["E_rms"] = curve.E_rms;
    j["method"] = curve.method;
    j["scales"] = curve.scales.size();
    j["series_hash"] = hash_hex(curve.series_hash);
    j["warnings"] = curve.warnings;
    auto [eta, gamma_ac] = exponent_relations(curve.H);
    j["eta"] = eta;
    j["gamma_ac"] = gamma_ac;
    return j.dump(2) + "\n";
}

std::string mf_result_to_csv(const MultifractalResult& result) {
    std::string out = "q,h,tau,alpha,f,e_rms\n";
    for (std::size_t j = 0; j < result.q.size(); ++j)
        out += format_double(result.q[j]) + "," + format_double(result.h[j]) + "," +
               format_double(result.tau[j]) + "," + format_double(result.alpha[j]) + "," +
               format_double(result.f_alpha[j]) + "," + format_double(result.e_rms[j]) + "\n";
    return out;
}

MultifractalResult mf_result_from_csv(std::istream& in) {
    MultifractalResult res;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        auto fields = split_csv_line(line);
        if (fields.size() < 6) throw DataError("multifractal csv: expected 6 columns");
        res.q.push_back(parse_double_field(fields[0], "q"));
        res.h.push_back(parse_double_field(fields[1], "h"));
        res.tau.push_back(parse_double_field(fields[2], "tau"));
        res.alpha.push_back(parse_double_field(fields[3], "alpha"));
        res.f_alpha.push_back(parse_double_field(fields[4], "f"));
        res.e_rms.push_back(parse_double_field(fields[5], "e_rms"));
    }
    return res;
}

std::string mf_result_to_json(const MultifractalResult& result) {
    json j;
    j["detrender"] = result.detrender;
    j["q_min"] = result.q.front();
    j["q_max"] = result.q.back();
    j["q_count"] = result.q.size();
    j["scales"] = result.scales;
    j["concave"] = result.concave;
    j["h_monotone"] = result.h_monotone;
    j["spectrum_width"] = spectrum_width(result);
    j["series_hash"] = hash_hex(result.series_hash);
    j["warnings"] = result.warnings;
    return j.dump(2) + "\n";
}

std::string spectrum_to_csv(const MultifractalResult& result) {
    std::vector<std::size_t> order(result.alpha.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return result.alpha[a] < result.alpha[b];
    });
    std::string out = "alpha,f\n";
    for (std::size_t i : order)
        out += format_double(result.alpha[i]) + "," + format_double(result.f_alpha[i]) + "\n";
    return out;
}

std::string weibull_fit_to_json(const WeibullFit& fit, std::uint64_t input_hash,
                                ZeroPolicy policy) {
    json j;
    j["model"] = "weibull";
    j["alpha"] = fit.alpha;
    j["beta"] = fit.beta;
    j["loglik"] = fit.loglik;
    j["n"] = fit.n;
    j["grad_norm"] = fit.grad_norm;
    j["iterations"] = fit.iterations;
    j["zero_policy"] = policy == ZeroPolicy::Include ? "include" : "exclude";
    j["input_hash"] = hash_hex(input_hash);
    return j.dump(2) + "\n";
}

std::string qexp_fit_to_json(const QExpFit& fit, std::uint64_t input_hash) {
    json j;
    j["model"] = "qexp";
    j["a"] = fit.a;
    j["g0"] = fit.g0;
    j["gamma"] = fit.gamma;
    j["sse"] = fit.sse;
    j["iterations"] = fit.iterations;
    j["input_hash"] = hash_hex(input_hash);
    return j.dump(2) + "\n";
}

std::string comparison_to_json(const FitComparison& cmp) {
    json j;
    j["body_winner"] = cmp.body_winner;
    j["tail_winner"] = cmp.tail_winner;
    j["decades"] = json::array();
    for (const auto& d : cmp.decades) {
        json e;
        e["decade_lo"] = d.decade_lo;
        e["weibull_mae"] = d.weibull_mae;
        e["qexp_mae"] = d.qexp_mae;
        e["bins"] = d.bins;
        j["decades"].push_back(e);
    }
    return j.dump(2) + "\n";
}

std::string parse_report_to_json(const ParseReport& report) {
    json j;
    j["total_rows"] = report.total_rows;
    j["accepted"] = report.accepted;
    j["malformed"] = report.malformed;
    j["out_of_session"] = report.out_of_session;
    j["row_errors"] = report.row_errors;
    return j.dump(2) + "\n";
}

}  // namespace itd
