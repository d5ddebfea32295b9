#include "doctest.h"

#include <sys/wait.h>

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "output.hpp"

using namespace cohprobe::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"cohprobe"};
  argv.insert(argv.end(), args);
  std::ostringstream out;
  std::ostringstream err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string f; std::getline(is, f, ',');) v.push_back(f);
  return v;
}

// Header lines must match exactly; numeric cells to a relative 1e-10.
void check_against_golden(const std::string& produced, const char* name) {
  const auto got = lines(produced);
  const auto want = lines(slurp(fs::path(COHPROBE_GOLDEN_DIR) / name));
  REQUIRE(got.size() == want.size());
  bool in_body = false;
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (!in_body && want[i].rfind('#', 0) != 0) {
      CHECK(got[i] == want[i]);  // column names
      in_body = true;
      continue;
    }
    if (!in_body) {
      CHECK(got[i] == want[i]);
      continue;
    }
    const auto g = split(got[i]);
    const auto w = split(want[i]);
    REQUIRE(g.size() == w.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double a = std::stod(g[k]);
      const double b = std::stod(w[k]);
      CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b)));
    }
  }
}

}  // namespace

TEST_CASE("value lists") {
  CHECK(parse_values("0.5") == std::vector<double>{0.5});
  CHECK(parse_values("0.1,0.3,0.5") == std::vector<double>{0.1, 0.3, 0.5});
  const auto r = parse_values("0:1:0.25");
  REQUIRE(r.size() == 5);
  CHECK(r.back() == doctest::Approx(1.0));
  CHECK_THROWS_AS(parse_values("0:1"), UsageError);
  CHECK_THROWS_AS(parse_values("abc"), UsageError);
  CHECK_THROWS_AS(parse_values("1:0:0.1"), UsageError);
}

TEST_CASE("csv quoting and number formatting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");

  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17}) {
    const std::string s = format_double(v);
    double back = 0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == v);
  }
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("json document") {
  Table t{{"x", "label"}, {{Cell{1.5}, Cell{std::string("a,b")}}, {Cell{std::nan("")}, Cell{true}}}};
  std::ostringstream os;
  write_json(os, {{"k", "v"}}, t);
  const auto j = nlohmann::json::parse(os.str());
  CHECK(j["format_version"] == kFormatVersion);
  CHECK(j["metadata"]["k"] == "v");
  CHECK(j["columns"][1] == "label");
  CHECK(j["rows"][0][0] == 1.5);
  CHECK(j["rows"][1][0].is_null());
  CHECK(j["rows"][1][1] == true);
}

TEST_CASE("golden outputs") {
  check_against_golden(invoke({"point", "--model", "tfim", "--lambda", "0.5"}).out, "point_tfim.csv");
  check_against_golden(invoke({"point", "--model", "xx", "--lambda", "0.5"}).out, "point_xx.csv");
  check_against_golden(invoke({"scan", "--model", "xx", "--lambda", "0.5:0.6:0.05"}).out, "scan_xx.csv");
  check_against_golden(invoke({"point", "--model", "kitaev", "--couplings", "0.5,0.25,0.25"}).out,
                       "point_kitaev.csv");

  const auto r = invoke({"point", "--model", "tfim", "--state", "gibbs", "--lambda", "0.8", "--kbt",
                         "0.5", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto got = nlohmann::json::parse(r.out);
  const auto want = nlohmann::json::parse(slurp(fs::path(COHPROBE_GOLDEN_DIR) / "point_gibbs.json"));
  CHECK(got["metadata"] == want["metadata"]);
  CHECK(got["columns"] == want["columns"]);
  for (std::size_t k = 0; k < want["rows"][0].size(); ++k) {
    CHECK(got["rows"][0][k].get<double>() ==
          doctest::Approx(want["rows"][0][k].get<double>()).epsilon(1e-10));
  }
}

TEST_CASE("an output header replays the run") {
  const fs::path dir = fs::temp_directory_path() / "cohprobe_cli_replay";
  fs::create_directories(dir);
  const std::string first = (dir / "first.csv").string();
  const std::string second = (dir / "second.csv").string();
  REQUIRE(invoke({"scan", "--model", "tfim", "--state", "gibbs", "--kbt", "0.3", "--lambda",
                  "0.9:1.1:0.05", "--richardson", "--output", first.c_str()})
              .code == 0);
  REQUIRE(invoke({"--config", first.c_str(), "--output", second.c_str()}).code == 0);
  CHECK(slurp(first) == slurp(second));
  fs::remove_all(dir);
}

TEST_CASE("exit codes") {
  CHECK(invoke({"point", "--model", "tfim", "--lambda", "0.5"}).code == 0);
  CHECK(invoke({"point", "--model", "nope"}).code == 2);
  CHECK(invoke({"point", "--model", "kitaev", "--couplings", "0.5,0.25,0.25", "--kbt", "0.1"}).code == 2);
  CHECK(invoke({"scan", "--model", "tfim", "--lambda", "2:1:0.1"}).code == 2);

  const auto r = invoke({"scan", "--model", "xx", "--xx-no-yy", "--lambda", "0:0.2:0.1"});
  CHECK(r.code == 1);
  CHECK(r.err.find("lambda") != std::string::npos);
}

TEST_CASE("the installed binary reports usage errors") {
  const std::string cmd = std::string("\"") + COHPROBE_CLI_PATH + "\" point --lambda x > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 2);
}
