#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rldp/cli.hpp"
#include "support.hpp"

using namespace rldp;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string model_path(const std::string& name) {
  return std::string(RLDP_MODELS_DIR) + "/" + name + ".json";
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("validate a shipped model") {
    const auto r = invoke({"validate", "--model", model_path("uniform12")});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("PASS\n") != std::string::npos);
  }

  TEST_CASE("validate reports a broken model with exit 1") {
    const auto path = std::filesystem::temp_directory_path() / "rldp_periodic.json";
    std::ofstream(path) << R"({"waiting": {"head": {"2": 0.5, "4": 0.5}},
                              "reward": {"dim": 1, "head": {"2": 1, "4": 1}}})";
    const auto r = invoke({"validate", "--model", path.string()});
    CHECK(r.code == kExitCheckFailed);
    CHECK(r.out.find("FAIL aperiodicity") != std::string::npos);
    const auto p = invoke({"partition", "--model", path.string(), "--T", "5"});
    CHECK(p.code == kExitUsage);
    CHECK(p.err.find("aperiodicity") != std::string::npos);
  }

  TEST_CASE("rate table for the renewal-count model") {
    const auto r = invoke({"rate", "--model", model_path("count"), "--grid", "0:1:101", "--kind",
                           "constrained", "--threads", "2"});
    CHECK(r.code == kExitOk);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 104);
    CHECK(rows[0].rfind("# manifest ", 0) == 0);
    CHECK(rows[2] == "w,rate,status,arg_phi");
    const auto last = split(rows.back());
    CHECK(std::stod(last[0]) == 1.0);
    CHECK(std::abs(std::stod(last[1]) - 0.693147) < 1e-6);
    const auto first = split(rows[3]);
    CHECK(first[1] == "inf");
    CHECK(first[2] == "infinite");
  }

  TEST_CASE("CSV bodies and manifests are reproducible") {
    const std::vector<std::string> args{"zfun", "--model", model_path("pinned"), "--grid",
                                        "-1:1:11"};
    const auto a = invoke(args);
    auto with_threads = args;
    with_threads.insert(with_threads.end(), {"--threads", "3"});
    const auto b = invoke(with_threads);
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);
    const auto c = invoke({"zfun", "--model", model_path("pinned"), "--grid", "-1:1:12"});
    CHECK(lines(c.out)[0] != lines(a.out)[0]);
  }

  TEST_CASE("csv files") {
    const auto path = std::filesystem::temp_directory_path() / "rldp_partition.csv";
    const auto r = invoke({"partition", "--model", model_path("fibonacci"), "--T", "10", "--csv",
                           path.string()});
    CHECK(r.code == kExitOk);
    std::ifstream in(path);
    std::stringstream body;
    body << in.rdbuf();
    const auto rows = lines(body.str());
    REQUIRE(rows.size() == 14);
    CHECK(rows[2] == "t,log_zc,log_z");
    CHECK(std::abs(std::exp(std::stod(split(rows[13])[1])) - 89.0) < 1e-9);
  }

  TEST_CASE("dist, empirical-rate and supermult") {
    const auto d = invoke({"dist", "--model", model_path("count"), "--t", "2", "--law",
                           "constrained", "--box", "0.9,1.1"});
    CHECK(d.code == kExitOk);
    const auto pos = d.out.find("] = ");
    REQUIRE(pos != std::string::npos);
    CHECK(std::abs(std::stod(d.out.substr(pos + 4)) - std::log(1.0 / 3.0)) < 1e-12);

    const auto e = invoke({"empirical-rate", "--model", model_path("count"), "--box", "0.95,1",
                           "--tlist", "100,200"});
    CHECK(e.code == kExitOk);
    CHECK(lines(e.out).size() == 5);

    const auto s = invoke({"check", "supermult", "--model", model_path("count"), "--box",
                           "0.5,0.8", "--max", "30"});
    CHECK(s.code == kExitOk);
    CHECK(s.out.find("0 violations") != std::string::npos);
  }

  TEST_CASE("mc requires a seed and is reproducible") {
    const std::vector<std::string> base{"mc", "--model", model_path("pinned"), "--t", "30",
                                        "--box", "0.3,0.6", "--law", "free", "--n", "5000"};
    CHECK(invoke(base).code == kExitUsage);
    auto seeded = base;
    seeded.insert(seeded.end(), {"--seed", "7"});
    const auto a = invoke(seeded);
    seeded.insert(seeded.end(), {"--threads", "4"});
    const auto b = invoke(seeded);
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);
  }

  TEST_CASE("counterexamples") {
    const auto open = invoke({"counterexample", "open-convex", "--t", "400"});
    CHECK(open.code == kExitOk);
    const auto closed = invoke({"counterexample", "closed-convex", "--tlist", "10,20,50,100",
                                "--n", "0", "--seed", "1"});
    CHECK(closed.code == kExitOk);
    CHECK(lines(closed.out).size() == 8);
  }

  TEST_CASE("biconjugate check") {
    const auto r = invoke({"check", "biconjugate", "--model", model_path("count"), "--wgrid",
                           "0.5:1:41", "--phigrid", "-2:2:9"});
    CHECK(r.code == kExitOk);
  }

  TEST_CASE("usage errors exit with 2") {
    CHECK(invoke({}).code == kExitUsage);
    CHECK(invoke({"frobnicate"}).code == kExitUsage);
    CHECK(invoke({"rate", "--model", model_path("count"), "--grid", "1:0:5"}).code == kExitUsage);
    CHECK(invoke({"rate", "--model", model_path("count"), "--grid", "0:1:5", "--kind", "x"}).code ==
          kExitUsage);
    CHECK(invoke({"dist", "--model", model_path("count"), "--t", "5", "--box", "0,1;0,1"}).code ==
          kExitUsage);
    CHECK(invoke({"validate", "--model", "/nonexistent.json"}).code == kExitUsage);
    CHECK(invoke({"dist", "--model", model_path("geometric"), "--t", "5"}).code == kExitUsage);
  }

  TEST_CASE("helpers") {
    CHECK(fnv1a("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
    const auto axes = parse_grid("0:1:3;-2:2:5");
    REQUIRE(axes.size() == 2);
    CHECK(axes[1].n == 5);
    CHECK_THROWS_AS(parse_grid("0:1"), std::invalid_argument);
    CHECK(parse_long_list("10,20,50") == std::vector<long>{10, 20, 50});
    CHECK_THROWS_AS(parse_long_list("10,x"), std::invalid_argument);
  }
}
