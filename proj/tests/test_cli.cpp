#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" VCHOQ_CLI "' " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string tmp(const std::string& name) { return std::string(VCHOQ_TEST_TMP) + "/" + name; }

}  // namespace

TEST_CASE("integrate") {
  const auto r = run("integrate --f preset:one --capacity exp-saturation");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["value"].get<double>() == doctest::Approx(0.632120559).epsilon(1e-12));
  CHECK(j.contains("error_estimate"));

  const auto half = run("integrate --f preset:one --capacity exp-saturation --on 0,0.5");
  REQUIRE(half.code == 0);
  CHECK(std::abs(nlohmann::json::parse(half.out)["value"].get<double>() - (1.0 - std::exp(-0.5))) <= 1e-9);
}

TEST_CASE("volterra and orbit CSV") {
  const auto v = run("volterra --f preset:one --capacity exp-saturation --grid 5");
  REQUIRE(v.code == 0);
  const auto rows = csv(v.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == std::vector<std::string>{"x", "Vf"});
  CHECK(std::stod(rows[5][1]) == doctest::Approx(1.0 - std::exp(-1.0)));

  const auto o = run("orbit --n 1 --capacity exp-saturation --grid 33");
  REQUIRE(o.code == 0);
  const auto orows = csv(o.out);
  REQUIRE(orows.size() == 34);
  CHECK(orows[0] == std::vector<std::string>{"x", "V0", "V1", "closed0", "closed1"});
  for (std::size_t i = 1; i < orows.size(); ++i) {
    const double x = std::stod(orows[i][0]);
    CHECK(std::abs(std::stod(orows[i][2]) - (1.0 - std::exp(-x))) <= 1e-8);
  }
}

TEST_CASE("norm and opnorm") {
  const auto n = run("norm --f preset:one --capacity exp-saturation --p 2");
  REQUIRE(n.code == 0);
  CHECK(std::abs(nlohmann::json::parse(n.out)["lp_norm"].get<double>() - 0.7950601) <= 1e-7);

  const auto o = run("opnorm --grid 257 --iters 100");
  REQUIRE(o.code == 0);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(std::abs(j["estimate"].get<double>() - j["reference"].get<double>()) <= 1e-3);
  CHECK(run("opnorm --capacity exp-saturation").code == 2);
}

TEST_CASE("check") {
  const auto a = run("check --suite thm-5.1-ii --seed 1 --samples 200 --no-runtime");
  CHECK(a.code == 0);
  const auto b = run("check --suite thm-5.1-ii --seed 1 --samples 200 --no-runtime");
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["violations"].empty());
  CHECK(j["samples"] == 200);

  const auto neg = run("check --suite 'capacity-laws[gamma=t^2]' --seed 7 --samples 2000");
  CHECK(neg.code == 0);
  CHECK_FALSE(nlohmann::json::parse(neg.out)["violations"].empty());

  CHECK(run("check --list").out.find("thm-6.2\n") != std::string::npos);
  CHECK(run("check --suite no-such-suite").code == 2);
}

TEST_CASE("span") {
  const auto path = tmp("cli_targets.json");
  std::ofstream(path) << R"(["sin-pi", "square"])";
  const auto r = run("span --targets '" + path + "' --n-max 3 --grid 65 --capacity exp-saturation");
  REQUIRE(r.code == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 9);
  CHECK(rows[0] == std::vector<std::string>{"n", "target", "residual"});
  CHECK(rows[1][1] == "sin-pi");
  CHECK(rows[8][1] == "square");
}

TEST_CASE("output file and byte stability") {
  const auto path = tmp("cli_volterra.csv");
  REQUIRE(run("volterra --f preset:ramp --grid 17 -o '" + path + "'").code == 0);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() == run("volterra --f preset:ramp --grid 17").out);
}

TEST_CASE("exit codes") {
  CHECK(run("integrate --f '{\"type\": \"pwl\"'").code == 2);
  CHECK(run("integrate --f preset:one --capacity cubic").code == 2);
  CHECK(run("integrate").code == 2);
  CHECK(run("norm --f preset:one --p 0.5").code == 2);
  CHECK(run("orbit --n -1").code == 2);
  CHECK(run("integrate --f preset:one", "VCHOQ_TOLERANCE=abc").code == 2);
  // An unreachable tolerance with a capped subdivision depth does not converge.
  CHECK(run("integrate --f preset:exp-gamma --capacity power --tolerance 1e-300").code == 3);
  CHECK(run("integrate --f preset:exp-gamma --capacity power", "VCHOQ_TOLERANCE=1e-300").code == 3);
}
