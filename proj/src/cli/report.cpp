#include <algorithm>
#include <sstream>

#include "lfold/cli.hpp"
#include "lfold/errors.hpp"

namespace lfold::cli {

namespace {

using nlohmann::ordered_json;

// Scalars render exactly as in JSON, strings without quotes, so every format
// carries identical numbers.
std::string scalar_text(const ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> row_columns(const ordered_json& rows) {
  std::vector<std::string> cols;
  for (const auto& row : rows) {
    for (const auto& [key, value] : row.items()) {
      if (std::find(cols.begin(), cols.end(), key) == cols.end()) cols.push_back(key);
    }
  }
  return cols;
}

void flatten(const ordered_json& obj, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& out) {
  for (const auto& [key, value] : obj.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      flatten(value, name, out);
    } else if (value.is_array()) {
      std::string joined;
      for (std::size_t i = 0; i < value.size(); ++i) joined += (i ? " " : "") + scalar_text(value[i]);
      out.emplace_back(name, joined);
    } else {
      out.emplace_back(name, scalar_text(value));
    }
  }
}

std::string render_table(const Report& r) {
  std::ostringstream out;
  std::vector<std::pair<std::string, std::string>> lines;
  flatten(r.result, "", lines);
  std::size_t width = 0;
  for (const auto& [k, v] : lines) width = std::max(width, k.size());
  out << "# " << r.command << "\n";
  for (const auto& [k, v] : lines) out << k << std::string(width - k.size() + 2, ' ') << v << "\n";
  if (!r.rows.empty()) {
    const auto cols = row_columns(r.rows);
    std::vector<std::size_t> widths;
    for (const auto& c : cols) widths.push_back(c.size());
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : r.rows) {
      std::vector<std::string> line;
      for (std::size_t i = 0; i < cols.size(); ++i) {
        line.push_back(row.contains(cols[i]) ? scalar_text(row[cols[i]]) : "");
        widths[i] = std::max(widths[i], line.back().size());
      }
      cells.push_back(std::move(line));
    }
    out << "\n";
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "  " : "") << std::string(widths[i] - cols[i].size(), ' ') << cols[i];
    out << "\n";
    for (const auto& line : cells) {
      for (std::size_t i = 0; i < line.size(); ++i) out << (i ? "  " : "") << std::string(widths[i] - line[i].size(), ' ') << line[i];
      out << "\n";
    }
  }
  std::vector<std::pair<std::string, std::string>> prov;
  flatten(r.provenance, "", prov);
  out << "\n# provenance:";
  for (const auto& [k, v] : prov) out << " " << k << "=" << v;
  out << "\n";
  return out.str();
}

std::string render_csv(const Report& r) {
  std::ostringstream out;
  if (!r.rows.empty()) {
    const auto cols = row_columns(r.rows);
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << csv_field(cols[i]);
    out << "\n";
    for (const auto& row : r.rows) {
      for (std::size_t i = 0; i < cols.size(); ++i) {
        out << (i ? "," : "") << (row.contains(cols[i]) ? csv_field(scalar_text(row[cols[i]])) : "");
      }
      out << "\n";
    }
    return out.str();
  }
  std::vector<std::pair<std::string, std::string>> lines;
  flatten(r.result, "", lines);
  flatten(r.provenance, "provenance", lines);
  out << "key,value\n";
  for (const auto& [k, v] : lines) out << csv_field(k) << "," << csv_field(v) << "\n";
  return out.str();
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "table") return Format::Table;
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  throw InputError("unknown format '" + name + "' (expected table, json or csv)");
}

std::string render(const Report& report, Format format) {
  switch (format) {
    case Format::Table: return render_table(report);
    case Format::Csv: return render_csv(report);
    case Format::Json: {
      ordered_json j;
      j["command"] = report.command;
      j["inputs"] = report.inputs;
      j["result"] = report.result;
      if (!report.rows.empty()) j["rows"] = report.rows;
      j["provenance"] = report.provenance;
      return j.dump(2) + "\n";
    }
  }
  return {};
}

}  // namespace lfold::cli
