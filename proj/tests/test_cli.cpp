#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kaenmaki/cli.hpp"
#include "support.hpp"

using testing_support::fixture;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& stdin_text = "") {
  args.insert(args.begin(), "kaenmaki");
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  const int code = kaenmaki::cli::run(args, {in, out, err});
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("kaenmaki_test_" + name)).string();
}

}  // namespace

TEST_CASE("validate") {
  const auto ok = run({"validate", "--spec", fixture("ex1.json")});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("strong_separation: true") != std::string::npos);
  CHECK(ok.out.find("mixing: true") != std::string::npos);

  const auto missing = run({"validate", "--spec", fixture("no_anti.json")});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("NoAntiDiagonal") != std::string::npos);

  CHECK(run({"validate", "--spec", fixture("malformed.json")}).code == 2);
  CHECK(run({"validate", "--spec", fixture("does_not_exist.json")}).code == 2);

  const auto json = run({"validate", "--spec", fixture("overlap.json"), "--output", "json"});
  CHECK(json.code == 0);
  CHECK(nlohmann::json::parse(json.out)["strong_separation"] == false);
}

TEST_CASE("spec from standard input") {
  const auto r = run({"validate", "--spec", "-"}, slurp(fixture("ex1.json")));
  CHECK(r.code == 0);
  CHECK(r.out.find("strong_separation: true") != std::string::npos);
}

TEST_CASE("report") {
  const auto r = run({"report", "--spec", fixture("ex1.json"), "--output", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.contains("ly_dim"));
  CHECK(j.contains("affinity_dim"));
  CHECK(j["warnings"].empty());

  const auto bad = run({"report", "--spec", fixture("ex1.json"), "--s", "2.5"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("SOutOfRange") != std::string::npos);

  const auto path = temp_path("report.json");
  std::filesystem::remove(path);
  const auto file = run({"report", "--spec", fixture("ex1.json"), "--output", "json", "--out", path});
  CHECK(file.code == 0);
  CHECK(file.out.empty());
  CHECK(nlohmann::json::parse(slurp(path))["projected_mode"] == "SscFormula");
  std::filesystem::remove(path);

  const auto text = run({"report", "--spec", fixture("ex1.json")});
  CHECK(text.out.find("ly_dim: ") != std::string::npos);
}

TEST_CASE("pressure, affinity and measure") {
  const auto p = run({"pressure", "--spec", fixture("ex1.json"), "--s", "1", "--t", "2", "--output", "json"});
  REQUIRE(p.code == 0);
  CHECK(std::abs(nlohmann::json::parse(p.out)["pressure"].get<double>() + std::log(2.0)) < 1e-12);
  CHECK(run({"pressure", "--spec", fixture("ex1.json"), "--t", "3"}).code == 2);

  const auto a = run({"affinity", "--spec", fixture("uniform4.json"), "--output", "json"});
  REQUIRE(a.code == 0);
  CHECK(nlohmann::json::parse(a.out)["affinity_dim"] == 2.0);

  const auto m = run({"measure", "--spec", fixture("ex1.json"), "--word", "1,2", "--s", "1", "--output", "json"});
  REQUIRE(m.code == 0);
  CHECK(std::abs(nlohmann::json::parse(m.out)["phi"].get<double>() - 1.0 / 12.0) < 1e-14);
  CHECK(run({"measure", "--spec", fixture("ex1.json"), "--word", "1,3"}).code == 2);
  CHECK(run({"measure", "--spec", fixture("ex1.json")}).code == 2);
}

TEST_CASE("verify") {
  const auto ok = run({"verify", "--spec", fixture("ex1.json"), "--max-depth", "8"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("FAIL") == std::string::npos);

  const auto corrupt = run({"verify", "--spec", fixture("ex1.json"), "--max-depth", "8", "--corrupt-potential"});
  CHECK(corrupt.code == 1);
  CHECK(corrupt.out.find("FAIL  phi identity") != std::string::npos);

  const auto big = run({"verify", "--spec", fixture("ex1.json"), "--max-depth", "40"});
  CHECK(big.code == 2);
  CHECK(big.err.find("TooLarge") != std::string::npos);

  const auto overlap = run({"verify", "--spec", fixture("overlap.json"), "--max-depth", "6", "--s", "0.9"});
  CHECK(overlap.code == 0);
  CHECK(overlap.out.find("SKIP") != std::string::npos);
}

TEST_CASE("sample, render and estimate are deterministic") {
  const std::vector<std::string> sample{"sample", "--spec", fixture("ex1.json"), "--count", "1000", "--depth", "50",
                                        "--seed", "7"};
  const auto a = run(sample);
  auto with_threads = sample;
  with_threads.insert(with_threads.end(), {"--threads", "3"});
  const auto b = run(with_threads);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("x,y,word\n", 0) == 0);

  const auto img = run({"render", "--spec", fixture("ex1.json"), "--px", "512", "--count", "5000"});
  REQUIRE(img.code == 0);
  CHECK(img.out.rfind("P5\n512 512\n255\n", 0) == 0);

  const auto est = run({"estimate", "--spec", fixture("ex1.json"), "--radii", "0.004:0.0625:4", "--count", "50000"});
  REQUIRE(est.code == 0);
  CHECK(est.out.find("slope: ") != std::string::npos);
  CHECK(est.out.find("stderr: ") != std::string::npos);
  CHECK(run({"estimate", "--spec", fixture("ex1.json"), "--radii", "bogus"}).code == 2);
}

TEST_CASE("project-dim") {
  const auto r = run({"project-dim", "--spec", fixture("transversal.json")});
  CHECK(r.code == 0);
  CHECK(r.out.find("ExpectedMin") != std::string::npos);
  const auto missing = run({"project-dim", "--spec", fixture("ex1.json"), "--mode", "user"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("MissingValue") != std::string::npos);
  const auto user = run({"project-dim", "--spec", fixture("ex1.json"), "--mode", "user", "--value", "0.4"});
  CHECK(user.code == 0);
  CHECK(user.out.find("UserSupplied") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"validate", "--no-such-flag"}).code == 2);
  CHECK(run({"report", "--output", "xml"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}
