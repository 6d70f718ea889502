#include "doctest.h"

#include <filesystem>
#include <sstream>

#include "cpat/cli.hpp"
#include "cpat/io.hpp"

using namespace cpat;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("cpat_cli_" + name)).string();
}

/// Data rows of a CSV table (manifest lines and the header removed).
std::vector<std::string> csv_rows(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> rows;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) == 0) continue;
    if (!header) {
      header = true;
      continue;
    }
    rows.push_back(line);
  }
  return rows;
}

}  // namespace

TEST_CASE("cli: usage errors exit 2") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"generate"}).code == kExitUsage);
  CHECK(run({"generate", "cubic"}).code == kExitUsage);
  CHECK(run({"generate", "zgamma", "--gamma", "2.5"}).code == kExitUsage);
  CHECK(run({"generate", "zgamma", "--gamma", "abc"}).code == kExitUsage);
  CHECK(run({"generate", "zgamma", "--alpha", "1", "--alpha-pi", "0.5"}).code == kExitUsage);
  CHECK(run({"generate", "zgamma", "--bits", "20"}).code == kExitUsage);
  CHECK(run({"riccati", "--gamma", "2"}).code == kExitUsage);
  CHECK(run({"painleve"}).code == kExitUsage);
  CHECK(run({"check", "all", "/nonexistent/x.json"}).code == kExitUsage);
  CHECK(run({"export", "png", "x.json"}).code == kExitUsage);
  const Run help = run({"--help"});
  CHECK(help.code == kExitOk);
  CHECK(help.out.find("generate") != std::string::npos);
}

TEST_CASE("cli: riccati at gamma 1 is identically 1") {
  const Run r = run({"riccati", "--gamma", "1", "--alpha-pi", "1/4", "-n", "100"});
  REQUIRE(r.code == kExitOk);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 101);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i] == std::to_string(i) + ",1");
  CHECK(r.out.find("# residuals: {\"status\":\"all_positive\"") != std::string::npos);
}

TEST_CASE("cli: generate, check, export") {
  const std::string json = temp_path("p.json");
  const Run g = run({"generate", "zgamma", "--gamma", "0.5", "--alpha-pi", "0.5", "--size", "20", "--bits", "212",
                     "--out", json});
  REQUIRE(g.code == kExitOk);
  const Artifact a = read_json(json);
  REQUIRE(a.grid);
  CHECK(a.grid->size() == 20);
  CHECK(std::stod(a.manifest.residuals["kite_spread"].get<std::string>()) < 1e-10);
  CHECK(a.manifest.bits == 212);
  CHECK(a.manifest.command.find("generate zgamma") != std::string::npos);
  CHECK(a.manifest.wall_seconds > 0.0);
  CHECK_FALSE(a.circles.empty());

  const Run c = run({"check", "all", json});
  CHECK(c.code == kExitOk);
  const Json reports = Json::parse(c.out);
  CHECK(reports.size() == 5);
  for (const auto& r : reports) CHECK(r["passed"] == true);

  for (const char* kind : {"kites", "orient", "angles", "embed", "sign"}) CHECK(run({"check", kind, json}).code == 0);

  const std::string svg = temp_path("p.svg");
  CHECK(run({"export", "svg", json, "--out", svg, "--mesh", "--axes"}).code == kExitOk);
  CHECK(read_text(svg).find("version=\"1.1\"") != std::string::npos);
  const Run csv = run({"export", "csv", json, "--table", "radii"});
  CHECK(csv.code == kExitOk);
  CHECK(csv.out.find("\nN,M,R\n") != std::string::npos);
  const Run back = run({"export", "json", json});
  CHECK(back.code == kExitOk);
  CHECK(Json::parse(back.out) == Json::parse(read_text(json)));

  std::filesystem::remove(json);
  std::filesystem::remove(svg);
}

TEST_CASE("cli: validation failures exit 1") {
  // A perturbed map no longer consists of kites.
  const std::string json = temp_path("bad.json");
  REQUIRE(run({"generate", "zgamma", "--gamma", "0.5", "--alpha-pi", "1/3", "--size", "10", "--bits", "106",
               "--out", json})
              .code == kExitOk);
  Json j = Json::parse(read_text(json));
  for (auto& p : j["grid"]) {
    if (p["n"] == 3 && p["m"] == 3) p["re"] = "2.5";
  }
  j.erase("radii");
  j.erase("circles");
  write_text(json, j.dump());
  CHECK(run({"check", "kites", json}).code == kExitFailed);
  CHECK(run({"check", "all", json}).code == kExitFailed);
  std::filesystem::remove(json);

  // A seed off the separatrix loses positivity during the evolution.
  CHECK(run({"radii", "--gamma", "0.5", "--alpha-pi", "1/3", "--ri", "0.9", "--mmax", "40"}).code == kExitFailed);
  // Double precision cannot hold the kite tolerance on a large patch at a small angle.
  const Run g = run({"generate", "zgamma", "--gamma", "0.5", "--alpha-pi", "1/6", "--size", "30", "--bits", "53"});
  CHECK(g.code == kExitFailed);
  CHECK(g.err.find("kite spread") != std::string::npos);
}

TEST_CASE("cli: remaining subcommands") {
  const Run r = run({"radii", "z2", "--alpha-pi", "1/3", "--mmax", "4"});
  CHECK(r.code == kExitOk);
  CHECK(csv_rows(r.out).size() == 25);
  CHECK(run({"radii", "log", "--alpha-pi", "1/3", "--mmax", "4"}).code == kExitOk);
  const Run z = run({"radii", "--gamma", "0.5", "--alpha-pi", "1/3", "--mmax", "6", "--format", "json"});
  CHECK(z.code == kExitOk);
  CHECK(Json::parse(z.out)["manifest"]["residuals"]["sign_condition"] == true);

  const Run s = run({"painleve", "shoot", "--gamma", "0.5", "--alpha-pi", "1/2", "--mmax", "16", "--seed-grid", "32",
                     "--tol", "1e-3"});
  CHECK(s.code == kExitOk);
  CHECK(s.out.find("\"q_closed_bracketed\":true") != std::string::npos);

  const Run d = run({"dpii", "--gamma", "0.5", "--alpha-pi", "1/2", "-n", "10"});
  CHECK(d.code == kExitOk);
  CHECK(csv_rows(d.out).size() == 11);
  CHECK(d.out.find("\"arg_in_sector\":true") != std::string::npos);

  const Run k = run({"generate", "kappa", "--kappa", "2", "--size", "6", "--bits", "106"});
  CHECK(k.code == kExitOk);
  CHECK_FALSE(Json::parse(k.out).contains("circles"));

  const Run w = run({"sweep", "--gamma", "0.5,1.5", "--alpha-pi", "1/4,1/2", "--size", "12", "--bits", "106"});
  CHECK(w.code == kExitOk);
  const auto rows = csv_rows(w.out);
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) CHECK(row.substr(row.rfind(',') + 1) == "pass");
}
