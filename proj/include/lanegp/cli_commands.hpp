#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lanegp/config.hpp"

namespace lanegp {

// Exit-code contract shared with CI:
//   0 success, 1 config/other failure, 2 unreadable input format,
//   3 nothing to work on (zero maneuvers / empty corpus),
//   4 refusing to overwrite an existing output without --force.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitFormat = 2;
inline constexpr int kExitEmpty = 3;
inline constexpr int kExitRefuse = 4;

RunConfig build_config(const std::string& config_file, const std::vector<std::string>& overrides);

// Windows in trip order: index.txt when present, else filename order.
std::vector<ManeuverWindow> load_corpus(const std::filesystem::path& dir);

int cmd_extract(const RunConfig& config, const std::string& input, const std::string& out_dir,
                bool force, bool synth);
int cmd_synth(const RunConfig& config, const std::string& out_dir, bool force);
int cmd_evaluate(const RunConfig& config, const std::string& corpus_dir, const std::string& out_dir,
                 bool force);
int cmd_report(const RunConfig& config, const std::string& records_csv, const std::string& out_dir,
               bool force);

}  // namespace lanegp
