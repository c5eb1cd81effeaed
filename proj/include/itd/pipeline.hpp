#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "itd/tickdata.hpp"

namespace itd {

inline constexpr const char* kToolVersion = "0.1.0";

struct AnalysisStatus {
    std::string name;
    bool ok = false;
    std::string error;  // empty on success
    std::vector<std::string> artifacts;
};

struct RunManifest {
    std::string config_json;  // full effective configuration
    std::string input_path;
    std::string input_hash;
    std::vector<AnalysisStatus> analyses;
    std::string to_json() const;
};

/// Execute the analyses requested by a JSON study configuration and write
/// all artifacts plus manifest.json under out_dir. A failing analysis is
/// recorded in the manifest and does not abort the others.
RunManifest run_study(const std::string& config_text, const std::filesystem::path& out_dir);

RunManifest run_study_file(const std::filesystem::path& config_path,
                           const std::filesystem::path& out_dir);

/// Contiguous day-range partition with day counts differing by at most one.
std::vector<std::vector<TickRecord>> partition_periods(const std::vector<TickRecord>& ticks,
                                                       int k);

}  // namespace itd
