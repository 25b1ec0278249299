#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "lfold/cli.hpp"
#include "lfold/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "lfold_test_cli";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), {"lfold", "--cache-dir", (scratch() / "cache").string()});
  std::ostringstream out, err;
  Run r;
  r.code = lfold::cli::run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

ordered_json run_json(std::vector<std::string> args) {
  args.insert(args.begin(), {"--format", "json"});
  const Run r = run(args);
  REQUIRE_MESSAGE(r.code == 0, r.err);
  return ordered_json::parse(r.out);
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("render formats carry the same numbers") {
  lfold::cli::Report r;
  r.command = "demo";
  r.result["x"] = 0.1 + 0.2;
  r.result["name"] = "a,b";
  r.provenance["seed"] = nullptr;
  const std::string json = lfold::cli::render(r, lfold::cli::Format::Json);
  const std::string csv = lfold::cli::render(r, lfold::cli::Format::Csv);
  const std::string table = lfold::cli::render(r, lfold::cli::Format::Table);
  const std::string number = ordered_json(0.1 + 0.2).dump();
  CHECK(json.find(number) != std::string::npos);
  CHECK(csv.find("x," + number) != std::string::npos);
  CHECK(csv.find("\"a,b\"") != std::string::npos);
  CHECK(table.find(number) != std::string::npos);
  CHECK_THROWS_AS(lfold::cli::parse_format("xml"), lfold::InputError);
}

TEST_CASE("eigenform build, verify and export") {
  const auto tau = (scratch() / "tau.csv").string();
  const Run b = run({"eigenform", "build", "--weight", "12", "--upto", "1000", "--out", tau});
  CHECK(b.code == 0);
  const auto rows = lines([&] {
    std::ifstream in(tau);
    return std::string(std::istreambuf_iterator<char>(in), {});
  }());
  REQUIRE(rows.size() == 1001);
  CHECK(rows[0] == "n,a");
  CHECK(rows[2] == "2,-24");
  CHECK(run({"eigenform", "verify", "--in", tau}).code == 0);

  CHECK(run({"eigenform", "build", "--weight", "13", "--upto", "10"}).code == 2);
  CHECK(run({"eigenform", "build", "--weight", "14", "--upto", "10"}).code == 2);
  CHECK(run({"eigenform", "verify", "--in", (scratch() / "missing.csv").string()}).code == 2);

  const Run e = run({"eigenform", "export", "--weight", "12", "--upto", "5", "--normalized"});
  CHECK(e.code == 0);
  CHECK(lines(e.out).size() == 6);
  CHECK(lines(e.out)[4] == "4,-1472,-0.71875");
}

TEST_CASE("corrupt coefficient file fails verification with the failing pair") {
  const auto path = scratch() / "bad.csv";
  REQUIRE(run({"eigenform", "build", "--weight", "12", "--upto", "50", "--out", path.string()}).code == 0);
  auto rows = lines([&] {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in), {});
  }());
  rows[6] = "6,-6047";
  {
    std::ofstream out(path);
    for (const auto& r : rows) out << r << "\n";
  }
  const Run v = run({"--format", "json", "eigenform", "verify", "--in", path.string()});
  CHECK(v.code == 1);
  const auto j = ordered_json::parse(v.out);
  CHECK(j["result"]["status"] == "fail");
  CHECK(j["result"]["failing_m"] == 2);
  CHECK(j["result"]["failing_n"] == 3);

  // Sums refuse the corrupt table as well.
  CHECK(run({"sum", "--ell", "3", "-D", "-4", "--in", path.string(), "--upto", "10"}).code == 1);
}

TEST_CASE("qform subcommands") {
  const auto cls = run_json({"qform", "class", "-D", "-23"});
  CHECK(cls["result"]["h"] == 3);
  REQUIRE(cls["rows"].size() == 3);
  CHECK(cls["rows"][0] == ordered_json({{"a", 1}, {"b", 1}, {"c", 6}}));
  CHECK(cls["rows"][1] == ordered_json({{"a", 2}, {"b", 1}, {"c", 3}}));
  CHECK(cls["rows"][2] == ordered_json({{"a", 2}, {"b", -1}, {"c", 3}}));

  const auto rep = run_json({"qform", "represent", "-a", "1", "-b", "0", "-c", "1", "--upto", "5"});
  std::vector<int> r;
  for (const auto& row : rep["rows"]) r.push_back(row["r"].get<int>());
  CHECK(r == std::vector<int>{4, 4, 0, 4, 8});

  CHECK(run({"qform", "check-formula", "-D", "-4", "--upto", "10000"}).code == 0);
  const auto na = run_json({"qform", "check-formula", "-a", "2", "-b", "1", "-c", "3", "--upto", "100"});
  CHECK(na["result"]["status"] == "formula not applicable");

  const auto red = run_json({"qform", "reduce", "-a", "1", "-b", "5", "-c", "7"});
  CHECK(red["result"]["reduced"] == "(1,1,1)");

  CHECK(run({"qform", "class", "-D", "5"}).code == 2);
  CHECK(run({"qform", "class", "-D", "-5"}).code == 2);
  CHECK(run({"qform", "reduce", "-a", "1", "-b", "2", "-c", "1"}).code == 2);
}

TEST_CASE("constants and cheb") {
  const auto c3 = run_json({"constants", "--ell", "3"});
  CHECK(c3["result"]["A"] == "5");
  CHECK(c3["result"]["B"] == "8");
  const auto c7 = run_json({"constants", "--ell", "7"});
  CHECK(c7["result"]["A"] == "93");
  CHECK(c7["result"]["B"] == "128");
  CHECK(run({"constants", "--ell", "4"}).code == 2);
  CHECK(run({"constants", "--ell", "1"}).code == 2);

  const auto ch = run_json({"cheb", "--ell", "3"});
  CHECK(ch["result"]["identity"] == "PASS");
  CHECK(run({"cheb", "--ell", "4"}).code == 0);
}

TEST_CASE("verify-fold") {
  CHECK(run({"verify-fold", "--ell", "3", "--pmax", "500", "-D", "-23"}).code == 0);
}

TEST_CASE("sum, signchange, bounds, lowerbound, eeta") {
  const auto s = run_json({"sum", "--ell", "3", "-D", "-4", "--weight", "12", "--upto", "2"});
  CHECK(s["result"]["S"].get<double>() == doctest::Approx(4 - 4 * 13824 / std::pow(2.0, 16.5)).epsilon(1e-14));
  const auto again = run_json({"sum", "--ell", "3", "-D", "-4", "--weight", "12", "--upto", "2"});
  CHECK(again == s);
  CHECK(run({"sum", "--ell", "3", "-D", "-23", "--mode", "SD", "--upto", "100"}).code == 0);
  CHECK(run({"sum", "--ell", "3", "-D", "-4", "--grid", "10,100,1000"}).code == 0);
  CHECK(run({"sum", "--ell", "3", "-D", "-4", "--grid", "10,abc"}).code == 2);
  CHECK(run({"sum", "--ell", "4", "-D", "-4", "--upto", "100"}).code == 2);
  CHECK(run({"sum", "--ell", "3", "-D", "-4", "--in", (scratch() / "tau.csv").string(), "--upto", "5000"}).code == 2);

  const auto sc = run_json({"signchange", "--mode", "Q", "--ell", "3", "-D", "-4", "--weight", "12", "--limit", "1000"});
  CHECK(sc["result"]["n"] == 2);
  CHECK(sc["result"]["witness_a"] == "-24");
  const auto sd = run_json({"signchange", "--mode", "D", "--ell", "3", "-D", "-23", "--limit", "1000"});
  CHECK(sd["result"]["witness_form"] == "(2,1,3)");
  CHECK(run({"signchange", "--mode", "X"}).code == 2);

  const auto b11 = run_json({"bounds", "--thm", "1.1", "--ell", "3", "-D", "-4", "-X", "1e6"});
  CHECK(b11["result"]["value"].get<double>() == doctest::Approx(6.3e6).epsilon(0.01));
  const auto b12 = run_json({"bounds", "--thm", "1.2", "--ell", "3", "-D", "-4", "--weight", "12", "--u0", "2.235"});
  CHECK(std::isfinite(b12["result"]["log_value"].get<double>()));
  CHECK(run({"bounds", "--thm", "1.2", "--u0", "1"}).code == 2);
  CHECK(run({"bounds", "--thm", "1.1", "--epsilon", "0"}).code == 2);

  const auto lb = run_json({"lowerbound", "-D", "-4", "--ell", "3", "--Y", "100", "--u", "1"});
  CHECK(lb["result"]["lhs"].get<double>() > 0);
  CHECK(run({"lowerbound", "-D", "-4", "--ell", "3", "--Y", "100", "--u", "0.5"}).code == 2);

  const auto e = run_json({"eeta", "-D", "-4", "--eta", "2", "-X", "10"});
  CHECK(e["result"]["E_primitive"] == 15.0);
}

TEST_CASE("sigma subcommand") {
  const auto t = run_json({"sigma", "--ell", "3", "--table", "--U", "1", "--table-step", "0.01"});
  REQUIRE(t["rows"].size() > 3);
  for (const auto& row : t["rows"]) {
    const double u = row["u"].get<double>();
    if (u > 0 && u <= 1.0 / 21) CHECK(row["sigma"].get<double>() == doctest::Approx(std::pow(u, 7.0)).epsilon(1e-12));
  }
  const auto u0 = run_json({"sigma", "--ell", "3", "--find-u0"});
  CHECK(u0["result"]["u0"].get<double>() > 1.0);
  CHECK(u0["provenance"]["K"] == 20);
  CHECK(u0["provenance"]["h"] == 1e-4);
  CHECK(run({"sigma", "--ell", "3", "--step", "0.5"}).code == 2);
  CHECK(run({"sigma", "--ell", "3", "--step", "0.005"}).code == 2);

  const auto mc = run_json({"--threads", "2", "sigma", "--ell", "3", "--mc-j", "1", "--mc-u", "1", "--samples", "20000", "--seed", "9"});
  CHECK(mc["provenance"]["seed"] == 9);
  CHECK(mc["provenance"]["threads"] == 2);
}

TEST_CASE("every subcommand honors all three formats with the same numbers") {
  const std::vector<std::vector<std::string>> commands = {
      {"constants", "--ell", "5"},
      {"qform", "class", "-D", "-23"},
      {"sum", "--ell", "3", "-D", "-4", "--upto", "500"},
      {"bounds", "--thm", "1.2", "--ell", "3", "-D", "-4"},
      {"eeta", "-D", "-4", "--eta", "2", "-X", "1000"},
      {"sigma", "--ell", "3", "--find-u0", "--step", "0.001"},
  };
  for (const auto& cmd : commands) {
    auto with = [&](const std::string& fmt) {
      std::vector<std::string> args{"--format", fmt};
      args.insert(args.end(), cmd.begin(), cmd.end());
      const Run r = run(args);
      REQUIRE(r.code == 0);
      return r.out;
    };
    const auto json = ordered_json::parse(with("json"));
    const std::string csv = with("csv");
    const std::string table = with("table");
    for (const auto& [key, value] : json["result"].items()) {
      if (value.is_object() || value.is_array()) continue;
      const std::string text = value.is_string() ? value.get<std::string>() : value.dump();
      CHECK_MESSAGE(table.find(text) != std::string::npos, key);
      if (json["rows"].empty()) CHECK_MESSAGE(csv.find(key + "," + text) != std::string::npos, key);
    }
    for (const auto& row : json["rows"]) {
      for (const auto& [key, value] : row.items()) {
        const std::string text = value.is_string() ? value.get<std::string>() : value.dump();
        CHECK(csv.find(text) != std::string::npos);
        CHECK(table.find(text) != std::string::npos);
      }
    }
  }
}

TEST_CASE("reports are bit-identical across reruns and thread counts") {
  const std::vector<std::vector<std::string>> commands = {
      {"sum", "--ell", "3", "-D", "-4", "--grid", "100,1000,10000"},
      {"sum", "--ell", "3", "-D", "-23", "--mode", "SD", "--upto", "5000"},
      {"qform", "represent", "-a", "2", "-b", "1", "-c", "3", "--upto", "300"},
      {"sigma", "--ell", "3", "--mc-j", "2", "--mc-u", "1", "--samples", "50000", "--seed", "4"},
  };
  for (const auto& cmd : commands) {
    auto with = [&](const std::string& threads) {
      std::vector<std::string> args{"--format", "json", "--threads", threads};
      args.insert(args.end(), cmd.begin(), cmd.end());
      const Run r = run(args);
      REQUIRE(r.code == 0);
      return r.out;
    };
    const std::string one = with("1");
    CHECK(with("1") == one);
    const auto a = ordered_json::parse(one);
    const auto b = ordered_json::parse(with("3"));
    CHECK(a["result"].dump() == b["result"].dump());
    CHECK(a.value("rows", ordered_json()).dump() == b.value("rows", ordered_json()).dump());
  }
}

TEST_CASE("timing goes to stderr only") {
  const Run r = run({"--timing", "constants", "--ell", "3"});
  CHECK(r.code == 0);
  CHECK(r.err.find("elapsed") != std::string::npos);
  CHECK(r.out.find("elapsed") == std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({"--format", "xml", "constants", "--ell", "3"}).code == 2);
  CHECK(run({"--version"}).code == 0);
}
