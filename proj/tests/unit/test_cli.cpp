#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "reslab/cli.hpp"

using namespace reslab;
using nlohmann::json;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(std::move(args), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST_CASE("charsum --max reproduces the hand value") {
  const auto r = run({"charsum", "--q", "7", "--N", "3", "--f", "one", "--max"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["q"] == 7);
  CHECK(j["j"] == 1);
  CHECK(std::abs(j["magnitude"].get<double>() - 2.0) < 1e-9);
}

TEST_CASE("charsum --chi 0 counts for f = one") {
  const auto r = run({"charsum", "--q", "7", "--N", "3", "--f", "one", "--chi", "0"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(std::abs(j["sum"]["re"].get<double>() - 3.0) < 1e-12);
  CHECK(std::abs(j["sum"]["im"].get<double>()) < 1e-12);
}

TEST_CASE("charsum validation failures exit 2") {
  CHECK(run({"charsum", "--q", "4", "--N", "2", "--f", "one", "--max"}).code ==
        kExitUsage);
  CHECK(run({"charsum", "--q", "7", "--N", "9", "--f", "one", "--max"}).code ==
        kExitUsage);
  CHECK(run({"charsum", "--q", "7", "--N", "3", "--f", "one"}).code ==
        kExitUsage);  // no mode
  CHECK(run({"charsum", "--q", "7", "--N", "3", "--f", "one", "--max", "--all"})
            .code == kExitUsage);
  CHECK(run({"charsum", "--q", "7", "--N", "3", "--f", "nope", "--max"}).code ==
        kExitUsage);
}

TEST_CASE("charsum csv output and determinism") {
  const std::vector<std::string> args = {"charsum", "--q",  "101", "--N", "10",
                                         "--f",     "steinhaus:1", "--all",
                                         "--format", "csv"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out.substr(0, 12) == "j,re,im,abs\n");
  // one header plus q-1 rows
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 101);
}

TEST_CASE("resonate bt with the unit set meets the closed form") {
  const char* path = "reslab_cli_unit_set.txt";
  {
    std::ofstream f(path);
    f << "1\n";
  }
  const auto r = run({"resonate", "bt", "--q", "101", "--N", "10", "--f", "one",
                      "--set", path});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["method"] == "bt");
  const double bound = j["resonance_bound"].get<double>();
  CHECK(std::abs(bound - 3.0151134457776365) < 1e-6);
  CHECK(j["empirical_max"].get<double>() >= bound * (1 - 1e-6));
  CHECK(j["audit"]["chain"]["principal_ok"].get<bool>());
  std::remove(path);
}

TEST_CASE("resonate bt flag validation") {
  CHECK(run({"resonate", "bt", "--q", "101", "--N", "10", "--f", "one"}).code ==
        kExitUsage);  // neither --set nor --auto-k
  CHECK(run({"resonate", "bt", "--q", "101", "--N", "10", "--f", "one", "--set",
             "{1}", "--auto-k", "4"})
            .code == kExitUsage);
}

TEST_CASE("resonate hough with a toy window") {
  const auto r = run({"resonate", "hough", "--q", "101", "--N", "10", "--f",
                      "one", "--window", "2,13"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["method"] == "hough");
  CHECK(j["audit"]["support_size"] == 7);
  const double bound = j["resonance_bound"].get<double>();
  CHECK(j["empirical_max"].get<double>() >= bound * (1 - 1e-6));
  CHECK(j.contains("predicted"));
}

TEST_CASE("gcdsum eval accepts inline sets") {
  const auto r = run({"gcdsum", "eval", "--set", "{1,2}"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("3.41421") != std::string::npos);
  const json j = json::parse(r.out);
  CHECK(j["K"] == 2);
  CHECK(std::abs(j["G"].get<double>() - 3.4142135623730951) < 1e-12);
}

TEST_CASE("gcdsum search beats the interval set") {
  const auto r = run({"gcdsum", "search", "--k", "16", "--pool-y", "13",
                      "--pool-b", "30030", "--iters", "100", "--seed", "1"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  const auto interval = run({"gcdsum", "eval", "--set",
                             "{1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16}"});
  const json ji = json::parse(interval.out);
  CHECK(j["normalized"].get<double>() >= ji["normalized"].get<double>());
}

TEST_CASE("gcdsum eta validation exits 2") {
  CHECK(run({"gcdsum", "eval", "--set", "{1,2}", "--tail", "--n", "4", "--eta",
             "0.6"})
            .code == kExitUsage);
}

TEST_CASE("gcdsum tail report through the CLI") {
  const auto r = run({"gcdsum", "eval", "--set", "{1,2}", "--tail", "--n", "1",
                      "--eta", "0.2"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(std::abs(j["tail"]["tail"].get<double>() - 3.4142135623730951) < 1e-9);
  CHECK(j["tail"]["chebyshev_ok"].get<bool>());
}

TEST_CASE("verify suite plumbing") {
  CHECK(run({"verify", "--suite", "e1"}).code == kExitOk);
  CHECK(run({"verify", "--suite", "nope"}).code == kExitUsage);
  const auto r = run({"verify", "--suite", "gcd", "--seed", "3"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["ok"].get<bool>());
  CHECK(j["results"][0]["suite"] == "gcd");
  CHECK(j["results"][0]["checks"].get<std::size_t>() > 0);
}

TEST_CASE("plot writes an SVG and a CSV deterministically") {
  const std::string svg_path = "reslab_cli_plot.svg";
  const std::string csv_path = "reslab_cli_plot.csv";
  const std::vector<std::string> args = {"plot", "--q", "1009", "--f",  "one",
                                         "--n-grid", "4:31:8",  "--out", svg_path};
  const auto a = run(args);
  REQUIRE(a.code == kExitOk);
  std::ifstream svg(svg_path);
  REQUIRE(svg.good());
  std::stringstream svg_body;
  svg_body << svg.rdbuf();
  // seven labeled curves
  std::size_t polylines = 0;
  std::string body = svg_body.str();
  for (std::size_t pos = 0; (pos = body.find("<polyline", pos)) != std::string::npos;
       ++polylines, ++pos) {
  }
  CHECK(polylines == 7);

  std::ifstream csv(csv_path);
  REQUIRE(csv.good());
  std::stringstream csv_body;
  csv_body << csv.rdbuf();
  const std::string csv_a = csv_body.str();
  CHECK(csv_a.substr(0, csv_a.find('\n')) ==
        "N,empirical_max,bt_bound,hough_bound,thm11,thm12,pv,burgess2");
  CHECK(std::count(csv_a.begin(), csv_a.end(), '\n') == 9);  // header + 8 rows

  // byte-identical on a re-run
  const auto b = run(args);
  REQUIRE(b.code == kExitOk);
  std::ifstream csv2(csv_path);
  std::stringstream csv_body2;
  csv_body2 << csv2.rdbuf();
  CHECK(csv_a == csv_body2.str());

  std::remove(svg_path.c_str());
  std::remove(csv_path.c_str());
}

TEST_CASE("report JSON bytes are stable across runs") {
  const std::vector<std::string> args = {"resonate", "bt", "--q", "101", "--N",
                                         "10", "--f", "steinhaus:1", "--auto-k",
                                         "8", "--iters", "20"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);
}

TEST_CASE("help exits 0") {
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({"charsum", "--help"}).code == kExitOk);
}
