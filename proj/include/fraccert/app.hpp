#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace fraccert::app {

const std::vector<std::string>& commands();

// Every default lives here; see README for the table.
nlohmann::json defaults(const std::string& command);

// defaults <- file config <- overrides, then validated.  Throws ConfigError.
nlohmann::json resolve(const std::string& command, const nlohmann::json& file_config, const nlohmann::json& overrides);

// Parses "key=value"; the value is read as JSON when possible and as a string otherwise.
std::pair<std::string, nlohmann::json> parse_override(const std::string& text);

struct Outcome {
  bool pass = false;
  nlohmann::json report;  // embeds the resolved config under "config"
  std::vector<std::pair<std::string, std::string>> files;  // name, contents
  std::vector<std::string> summary;
};

Outcome execute(const std::string& command, const nlohmann::json& config);

// Write to a sibling temporary file, then rename over the target.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

// Executes, writes report.json plus the command's data files into `out`, prints the summary.
// Returns 0 when every check passes and 1 otherwise; library errors propagate.
int run(const std::string& command, const nlohmann::json& config, const std::filesystem::path& out, std::ostream& log);

}  // namespace fraccert::app
