#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <system_error>

#include "lfold/errors.hpp"
#include "lfold/modforms.hpp"

namespace lfold::mf {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path metadata_path(const fs::path& table) {
  fs::path meta = table;
  meta += ".meta.json";
  return meta;
}

void save_eigenform(const Eigenform& f, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open " + path.string() + " for writing");
    out << "n,a\n";
    const auto coeffs = f.coefficients();
    for (std::uint64_t n = 1; n < coeffs.size(); ++n) out << n << ',' << coeffs[n].get_str() << '\n';
    if (!out) throw InputError("write failed for " + path.string());
  }
  const json meta = {
      {"label", f.label()},
      {"weight", f.weight()},
      {"level", f.level()},
      {"count", f.x_max()},
      {"engine_version", kEngineVersion},
  };
  std::ofstream out(metadata_path(path));
  if (!out) throw InputError("cannot open " + metadata_path(path).string() + " for writing");
  out << meta.dump(2) << '\n';
}

Eigenform load_eigenform(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open coefficient file " + path.string());

  const fs::path meta_path = metadata_path(path);
  std::ifstream meta_in(meta_path);
  if (!meta_in) throw ParseError("missing metadata sidecar " + meta_path.string());
  json meta;
  try {
    meta = json::parse(meta_in);
  } catch (const json::exception& e) {
    throw ParseError("malformed metadata " + meta_path.string() + ": " + e.what());
  }
  for (const char* key : {"label", "weight", "level", "count"}) {
    if (!meta.contains(key)) throw ParseError("metadata lacks field '" + std::string(key) + "'");
  }
  int weight = 0;
  std::uint64_t level = 0;
  std::uint64_t count = 0;
  std::string label;
  try {
    weight = meta.at("weight").get<int>();
    level = meta.at("level").get<std::uint64_t>();
    count = meta.at("count").get<std::uint64_t>();
    label = meta.at("label").get<std::string>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("metadata field has the wrong type: ") + e.what());
  }

  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty coefficient file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "n,a") throw ParseError("expected header 'n,a', got '" + line + "'");

  std::vector<Integer> coeffs{0};
  coeffs.reserve(count + 1);
  std::uint64_t expected_n = 1;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("row " + std::to_string(expected_n) + ": missing comma");
    const std::string n_text = line.substr(0, comma);
    const std::string a_text = line.substr(comma + 1);
    std::uint64_t n = 0;
    try {
      std::size_t used = 0;
      n = std::stoull(n_text, &used);
      if (used != n_text.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ParseError("row " + std::to_string(expected_n) + ": bad index '" + n_text + "'");
    }
    if (n != expected_n) {
      throw ParseError("rows must start at n = 1 without gaps: expected " + std::to_string(expected_n) + ", got " +
                       std::to_string(n));
    }
    Integer a;
    const bool digits_ok = !a_text.empty() && a_text.find_first_not_of("-0123456789") == std::string::npos &&
                           a_text.find('-', 1) == std::string::npos;
    if (!digits_ok || a.set_str(a_text, 10) != 0) {
      throw ParseError("row " + std::to_string(n) + ": '" + a_text + "' is not a decimal integer");
    }
    coeffs.push_back(std::move(a));
    ++expected_n;
  }
  if (coeffs.size() - 1 != count) {
    throw ParseError("metadata count " + std::to_string(count) + " does not match " +
                     std::to_string(coeffs.size() - 1) + " rows");
  }
  if (count == 0) throw ParseError("coefficient file has no rows");

  Eigenform f(weight, level, label, std::move(coeffs));
  const IntegrityReport report = verify_integrity(f, f.x_max());
  if (!report.pass) throw InvariantViolation(path.string() + ": " + report.failure, report.pair);
  return f;
}

Eigenform cached_level_one_eigenform(int weight, std::uint64_t upto, const std::optional<fs::path>& cache_dir) {
  std::optional<fs::path> dir = cache_dir;
  if (!dir) {
    if (const char* env = std::getenv("LFOLD_CACHE_DIR"); env != nullptr && *env != '\0') dir = fs::path(env);
  }
  if (!dir) return build_level_one_eigenform(weight, upto);

  std::ostringstream key;
  key << "w" << weight << "_N1_X" << upto << "_e" << kEngineVersion << ".csv";
  const fs::path file = *dir / key.str();
  std::error_code ec;
  if (fs::exists(file, ec) && fs::exists(metadata_path(file), ec)) return load_eigenform(file);

  Eigenform f = build_level_one_eigenform(weight, upto);
  // Written under a temporary name and renamed into place.
  fs::path tmp = file;
  tmp += ".tmp";
  save_eigenform(f, tmp);
  fs::rename(metadata_path(tmp), metadata_path(file), ec);
  if (!ec) fs::rename(tmp, file, ec);
  return f;
}

}  // namespace lfold::mf
