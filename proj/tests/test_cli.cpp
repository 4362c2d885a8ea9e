#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(IFD_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("ifd_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kTriangle = R"({"m": 1,
 "vertices": [{"id": "a", "pos": [0, 0]}, {"id": "b", "pos": [1, 0]},
              {"id": "c", "pos": [0.5, 0.8660254037844386]}],
 "simplices": {"1": [["a", "b"], ["b", "c"], ["a", "c"]], "2": [["a", "b", "c"]]},
 "chain": {"1": {"0": 1, "1": 1, "2": -1}}})";

const char* kMissingFace = R"({"m": 1,
 "vertices": [{"id": "a", "pos": [0, 0]}, {"id": "b", "pos": [1, 0]},
              {"id": "c", "pos": [0.5, 0.8660254037844386]}],
 "simplices": {"1": [["a", "b"], ["b", "c"]], "2": [["a", "b", "c"]]}})";

}  // namespace

TEST_CASE("flatnorm on the boundary of one triangle") {
  const auto tri = write("tri.json", kTriangle);
  auto exact = run("flatnorm --input " + tri + " --method exact --coeff-bound 1");
  REQUIRE(exact.code == 0);
  auto j = json::parse(exact.out);
  CHECK(j["value"].get<double>() == doctest::Approx(std::sqrt(3.0) / 4).epsilon(1e-12));
  CHECK(j["certified"].get<bool>());
  auto lp = run("flatnorm --input " + tri + " --method lp");
  REQUIRE(lp.code == 0);
  CHECK(json::parse(lp.out)["value"].get<double>() == doctest::Approx(std::sqrt(3.0) / 4).epsilon(1e-9));
}

TEST_CASE("batch flatnorm keeps input order for any job count") {
  const auto batch = write("batch.json", std::string("[") + kTriangle + "," + kTriangle + "]");
  auto a = run("flatnorm --input " + batch + " --jobs 1");
  auto b = run("flatnorm --input " + batch + " --jobs 3");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(json::parse(a.out).size() == 2);
}

TEST_CASE("seeded fixtures are reproducible and the methods agree") {
  for (int seed : {1, 2, 3, 11}) {
    auto a = run("flatnorm --seed " + std::to_string(seed));
    auto b = run("flatnorm --seed " + std::to_string(seed));
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    auto e = run("flatnorm --seed " + std::to_string(seed) + " --method exact");
    REQUIRE(e.code == 0);
    const double lp = json::parse(a.out)["value"], ex = json::parse(e.out)["value"];
    CHECK(lp == doctest::Approx(ex).epsilon(1e-9));
  }
}

TEST_CASE("study writes the requested rows") {
  const auto csv = (scratch() / "tori.csv").string();
  auto r = run("study --name tori-collapse --jmax 50 --csv " + csv);
  REQUIRE(r.code == 0);
  std::istringstream in(slurp(csv));
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("j,dF_bound,dGH_bound,mass,hypothesis_ok", 0) == 0);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream f(line);
    std::string j, df, gh;
    std::getline(f, j, ',');
    std::getline(f, df, ',');
    std::getline(f, gh, ',');
    CHECK(std::stod(gh) == doctest::Approx(M_PI / (2.0 * std::stoi(j))).epsilon(1e-15));
  }
  CHECK(rows == 50);
}

TEST_CASE("study output does not depend on --jobs") {
  const auto d = scratch();
  for (int jobs : {1, 4}) {
    const std::string tag = std::to_string(jobs);
    auto r = run("study --name one-hair --jmax 60 --jobs " + tag + " --csv " + (d / ("o" + tag + ".csv")).string() +
                 " --out " + (d / ("o" + tag + ".json")).string());
    REQUIRE(r.code == 0);
  }
  CHECK(slurp((d / "o1.csv").string()) == slurp((d / "o4.csv").string()));
  CHECK(slurp((d / "o1.json").string()) == slurp((d / "o4.json").string()));
}

TEST_CASE("validate") {
  auto ok = run("validate --input " + write("tri.json", kTriangle));
  CHECK(ok.code == 0);
  auto bad = run("validate --input " + write("missing.json", kMissingFace));
  CHECK(bad.code == 1);
  CHECK(bad.out.find("(a,c)") != std::string::npos);
  auto garbled = run("validate --input " + write("garbled.json", "{\"m\": 1,\n \"vertices\": [1, 2,]}"));
  CHECK(garbled.code == 1);
  CHECK(garbled.out.find("line 2") != std::string::npos);
}

TEST_CASE("distance and glue") {
  auto gh = run("distance --input " + write("gh.json", R"({"X": {"matrix": [[0, 1], [1, 0]]},
    "Y": {"matrix": [[0, 1.5], [1.5, 0]]},
    "Z": {"matrix": [[0, 1, 1.5], [1, 0, 0.5], [1.5, 0.5, 0]]}, "phi": [0, 1], "psi": [0, 2]})"));
  REQUIRE(gh.code == 0);
  auto reports = json::parse(gh.out)["reports"];
  CHECK(reports[0]["value"].get<double>() == doctest::Approx(0.25));
  CHECK(reports[1]["value"].get<double>() == doctest::Approx(0.5));

  auto flat = run("distance --input " + write("fd.json", std::string(R"({"mesh": )") + kTriangle +
                                                             R"(, "chains": [{"0": 1, "1": 1, "2": -1}, {}]})"));
  REQUIRE(flat.code == 0);
  CHECK(json::parse(flat.out)["flat"]["value"].get<double>() == doctest::Approx(std::sqrt(3.0) / 4));

  auto g = run("glue --input " + write("glue.json", R"({"construction": "glue_two", "X": {"matrix": [[0]]},
    "Z1": {"matrix": [[0, 1], [1, 0]]}, "Z2": {"matrix": [[0, 2], [2, 0]]}, "phi1": [0], "phi2": [0]})"));
  REQUIRE(g.code == 0);
  auto gj = json::parse(g.out);
  CHECK(gj["passes"].get<bool>());
  CHECK(gj["glued"]["result"]["matrix"][1][2].get<double>() == 3.0);
}

TEST_CASE("errors and usage") {
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("study --name tori-collapse --frob 1").code == 2);
  CHECK(run("flatnorm --method simplex --seed 1").code == 2);
  CHECK(run("study --name nope").code == 1);
  auto h = run("study --name hairy-sphere --params p_R=-2");
  CHECK(h.code == 1);
  CHECK(h.out.find("hypothesis") != std::string::npos);
  CHECK(run("study --name tori-collapse --params L2").code == 1);
  CHECK(run("--help").code == 0);
}
