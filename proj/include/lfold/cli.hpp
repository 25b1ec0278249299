#pragma once

// Command-line front end: argument handling, report assembly and rendering.

#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace lfold::cli {

inline constexpr const char* kToolVersion = "1.0.0";

enum class Format { Table, Json, Csv };

Format parse_format(const std::string& name);

struct Config {
  std::optional<std::string> cache_dir;  // default: LFOLD_CACHE_DIR
  int default_weight = 12;
  std::uint64_t default_level = 1;
  Format output_format = Format::Table;
  double epsilon = 0.01;
  double grid_step = 1e-4;
  unsigned truncation_K = 20;
  unsigned thread_count = 0;  // 0 = hardware concurrency
  std::uint64_t seed = 1;

  // Throws InputError unless epsilon > 0, 0 < grid_step <= 1e-2 and K >= 1.
  void validate() const;
  unsigned threads() const;
};

/// One command's output. `result` holds the payload; `rows`, when present,
/// is a list of records rendered as a table or CSV body. Timing is never part
/// of a report, so reruns with identical inputs render identically.
struct Report {
  std::string command;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  nlohmann::ordered_json result = nlohmann::ordered_json::object();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  nlohmann::ordered_json provenance = nlohmann::ordered_json::object();
  int exit_code = 0;
};

std::string render(const Report& report, Format format);

/// Runs the tool with argv-style arguments (args[0] is the program name).
/// Returns 0 on success or pass, 1 on a verification failure and 2 on bad input.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lfold::cli
