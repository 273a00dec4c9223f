#include <cstdio>
#include <fstream>
#include <sstream>

#include "cntqd/cli.hpp"

namespace cntqd::cli {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

void emit_csv(const ResultTable& t, const std::string& path) {
  std::ostringstream body;
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    body << (c ? "," : "") << t.columns[c];
  body << "\n";
  for (const auto& row : t.rows) {
    if (row.size() != t.columns.size())
      throw ValidationError("row arity does not match the column count");
    for (std::size_t c = 0; c < row.size(); ++c)
      body << (c ? "," : "") << format_double(row[c]);
    body << "\n";
  }

  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file " + path);
    out << body.str();
    if (!out) throw IoError("failed writing " + path);
  }

  for (const auto& [suffix, content] : t.attachments) {
    std::ofstream out(path + suffix, std::ios::binary);
    if (!out) throw IoError("cannot open output file " + path + suffix);
    out << content;
    if (!out) throw IoError("failed writing " + path + suffix);
  }

  nlohmann::json meta;
  meta["command"] = t.command;
  meta["scenario_hash"] = hex64(t.scenario_hash);
  meta["tool_version"] = kToolVersion;
  meta["columns"] = t.columns;
  meta["rows"] = t.rows.size();
  meta["extra"] = t.extra.is_null() ? nlohmann::json::object() : t.extra;
  std::ofstream metaout(path + ".meta.json", std::ios::binary);
  if (!metaout) throw IoError("cannot open output file " + path + ".meta.json");
  metaout << meta.dump(1) << "\n";
  if (!metaout) throw IoError("failed writing " + path + ".meta.json");
}

}  // namespace cntqd::cli
