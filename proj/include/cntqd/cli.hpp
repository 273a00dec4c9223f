#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cntqd/errors.hpp"

// Scenario-file front end.  One scenario file = one command; grids and seeds
// live inside the scenario so a run is reproducible from the file alone.

namespace cntqd::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum class KeyType { number, integer, boolean, string };

struct KeySpec {
  std::string key;
  KeyType type = KeyType::number;
  bool required = false;
  double min_value = 0.0;  // inclusive bounds for numeric keys
  double max_value = 0.0;
  double number_default = 0.0;
  bool bool_default = false;
  std::string string_default;
  std::vector<std::string> choices;  // for string keys; empty = free text
  std::string unit;                  // documentation only
};

struct CommandSchema {
  std::string command;
  std::vector<KeySpec> keys;
};

const std::vector<CommandSchema>& command_schemas();

struct Scenario {
  std::string command;
  nlohmann::json params;  // fully validated, defaults applied
  std::string output_path;
};

Scenario parse_scenario(const std::string& text);
Scenario parse_scenario_file(const std::string& path);

struct ResultTable {
  std::string command;
  std::vector<std::string> columns;  // names carry unit suffixes
  std::vector<std::vector<double>> rows;
  std::uint64_t scenario_hash = 0;
  nlohmann::json extra;  // scalar diagnostics, written to the metadata file
  // additional files written next to the CSV: (path suffix, content)
  std::vector<std::pair<std::string, std::string>> attachments;
};

ResultTable run_scenario(const Scenario& s);

// RFC-4180-style CSV (LF line ends, 17 significant digits) plus a sibling
// <path>.meta.json carrying the scenario hash and tool version.
void emit_csv(const ResultTable& t, const std::string& path);

std::uint64_t scenario_hash(const Scenario& s);

}  // namespace cntqd::cli
