#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "itd/distfit.hpp"
#include "itd/intraday.hpp"
#include "itd/multifractal.hpp"
#include "itd/scaling.hpp"
#include "itd/stats_core.hpp"
#include "itd/tickdata.hpp"

namespace itd {

/// Shortest round-trip decimal representation; deterministic across runs.
std::string format_double(double v);

/// Write-temp-then-rename so a crashed run never leaves a partial artifact
/// under a final name.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::uint64_t hash_file(const std::filesystem::path& path);

/// One-column series CSV with optional `# key=value` metadata header lines.
std::string series_to_csv(const std::vector<double>& values,
                          const std::map<std::string, std::string>& metadata = {});
std::vector<double> series_from_csv(std::istream& in);
std::vector<double> load_series(const std::filesystem::path& path);

std::string duration_series_to_csv(const DurationSeries& series);

std::string pdf_to_csv(const EmpiricalPdf& pdf);
EmpiricalPdf pdf_from_csv(std::istream& in);

std::string pattern_to_csv(const IntradayPattern& pattern);

std::string curve_to_csv(const FluctuationCurve& curve);
std::string curve_to_json(const FluctuationCurve& curve);

std::string mf_result_to_csv(const MultifractalResult& result);
std::string mf_result_to_json(const MultifractalResult& result);
MultifractalResult mf_result_from_csv(std::istream& in);

/// f(alpha) pairs sorted by alpha, ready for plotting.
std::string spectrum_to_csv(const MultifractalResult& result);

std::string weibull_fit_to_json(const WeibullFit& fit, std::uint64_t input_hash,
                                ZeroPolicy policy);
std::string qexp_fit_to_json(const QExpFit& fit, std::uint64_t input_hash);
std::string comparison_to_json(const FitComparison& cmp);
std::string parse_report_to_json(const ParseReport& report);

}  // namespace itd
