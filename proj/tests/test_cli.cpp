// Drives the installed command-line binary end to end: subcommand outputs,
// config/flag merging, manifest checksums, byte reproducibility, and exit
// codes. The binary path is injected at compile time as GTD_CLI_PATH.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <gtd/vdw.hpp>

#include "sha256.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Scratch {
  fs::path dir;

  explicit Scratch(const std::string& tag) {
    dir = fs::temp_directory_path() /
          ("gtd_cli_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string path(const std::string& name) const {
    return (dir / name).string();
  }
};

int run_cli(const std::string& args, const std::string& stderr_to = "") {
  std::string cmd = std::string(GTD_CLI_PATH) + " " + args + " > /dev/null";
  cmd += stderr_to.empty() ? " 2> /dev/null" : (" 2> " + stderr_to);
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) { return json::parse(read_file(p)); }

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream f(p);
  REQUIRE(f.good());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(f, line)) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

TEST_CASE("version flag prints the library version") {
  Scratch sc("version");
  const std::string cmd = std::string(GTD_CLI_PATH) + " --version > " +
                          sc.path("v.txt") + " 2> /dev/null";
  REQUIRE(std::system(cmd.c_str()) != -1);
  CHECK(read_file(sc.path("v.txt")) == "0.1.0\n");
}

TEST_CASE("curvature: ideal gas grid is flat with no flagged cells") {
  Scratch sc("curv_ideal");
  CHECK(run_cli("curvature --a 0 --b 0 --out " + sc.dir.string()) == 0);

  const auto rows = read_csv(sc.path("curvature.csv"));
  REQUIRE(rows.size() == 401);  // header + 20x20
  CHECK(rows[0] == std::vector<std::string>{"U", "V", "R"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 3);
    CHECK(std::abs(std::stod(rows[i][2])) < 1e-9);
  }

  const json summary = read_json(sc.path("curvature_summary.json"));
  CHECK(summary.at("flagged_cells") == 0);
  CHECK(summary.at("max_abs_curvature").get<double>() < 1e-9);
  CHECK(summary.at("grid").at("cells") == 400);
}

TEST_CASE("curvature: flagged cells trace the singular locus") {
  Scratch sc("curv_locus");
  CHECK(run_cli("curvature --a 1 --b 1 --u-range 0.02:0.3:24 "
                "--v-range 2:6:24 --out " +
                sc.dir.string()) == 0);

  const auto rows = read_csv(sc.path("curvature.csv"));
  REQUIRE(rows.size() == 24 * 24 + 1);
  const gtd::VdwParams params{1.0, 1.0, 1.0};
  const double du = (0.3 - 0.02) / 23.0;

  // column -> flagged U values
  std::vector<double> us, vs;
  std::vector<std::pair<double, double>> flagged;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double U = std::stod(rows[i][0]);
    const double V = std::stod(rows[i][1]);
    if (rows[i][2] == "inf") flagged.emplace_back(U, V);
  }
  CHECK(!flagged.empty());

  const json summary = read_json(sc.path("curvature_summary.json"));
  CHECK(summary.at("flagged_cells").get<std::size_t>() == flagged.size());

  // every column whose locus energy lies inside the U range must have a
  // flagged cell within one grid spacing of it
  for (int j = 0; j < 24; ++j) {
    const double V = 2.0 + (6.0 - 2.0) * j / 23.0;
    const double target = gtd::phase_boundary_energy(V, params);
    if (target < 0.02 + du || target > 0.3 - du) continue;
    bool hit = false;
    for (const auto& [U, Vf] : flagged)
      if (std::abs(Vf - V) < 1e-9 && std::abs(U - target) <= du + 1e-12)
        hit = true;
    CHECK(hit);
  }
}

TEST_CASE("curvature: a one-cell grid produces a single data row") {
  Scratch sc("curv_single");
  CHECK(run_cli("curvature --a 1 --b 1 --u-range 2:2:1 --v-range 3:3:1 "
                "--out " +
                sc.dir.string()) == 0);
  const auto rows = read_csv(sc.path("curvature.csv"));
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][0] == "2");
  CHECK(rows[1][1] == "3");
  CHECK(rows[1][2] != "inf");
}

TEST_CASE("curvature: grid points outside the domain are rejected") {
  Scratch sc("curv_domain");
  const int rc = run_cli("curvature --a 1 --b 1 --u-range 1:2:2 "
                         "--v-range 0.5:3:3 --out " +
                             sc.dir.string(),
                         sc.path("err.txt"));
  CHECK(rc == 2);
  CHECK(read_file(sc.path("err.txt")).find("outside the valid domain") !=
        std::string::npos);
  CHECK(!fs::exists(sc.path("curvature.csv")));
}

TEST_CASE("geodesics: sweep emits per-trajectory CSV, report, and svg") {
  Scratch sc("geo_sweep");
  CHECK(run_cli("geodesics --b 0.05 --u0-range 0:40:3 --format csv "
                "--format json --format svg --out " +
                sc.dir.string()) == 0);

  const json report = read_json(sc.path("geodesics_report.json"));
  REQUIRE(report.at("items").size() == 3);
  for (const json& item : report.at("items")) {
    CHECK(item.at("error").is_null());
    CHECK(item.at("classification") == "incomplete-at-phase-boundary");
    CHECK(item.at("termination") == "singular-boundary");
    CHECK(item.at("residual").get<double>() < 1e-2);
  }

  for (int i = 0; i < 3; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "geodesic_%03d.csv", i);
    const auto rows = read_csv(sc.path(name));
    REQUIRE(rows.size() >= 3);
    CHECK(rows[0] == std::vector<std::string>{"tau", "U", "V", "dU", "dV"});
    double prev = -1.0;
    for (std::size_t k = 1; k < rows.size(); ++k) {
      REQUIRE(rows[k].size() == 5);
      const double tau = std::stod(rows[k][0]);
      CHECK(tau > prev);
      prev = tau;
      for (const std::string& cell : rows[k])
        CHECK(std::isfinite(std::stod(cell)));
    }
  }

  const std::string svg = read_file(sc.path("geodesics.svg"));
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("geodesics: manifest records checksums that match the outputs") {
  Scratch sc("geo_manifest");
  CHECK(run_cli("geodesics --b 0.05 --u0-range 10:30:2 --format csv "
                "--format json --out " +
                sc.dir.string()) == 0);
  const json manifest = read_json(sc.path("manifest.json"));
  CHECK(manifest.at("version") == "0.1.0");
  CHECK(manifest.at("command") == "geodesics");
  CHECK(manifest.at("config").at("b") == 0.05);
  CHECK(manifest.at("duration_seconds").get<double>() >= 0.0);

  const json outputs = manifest.at("outputs");
  REQUIRE(outputs.size() == 3);  // two trajectory CSVs + report
  for (const json& out : outputs) {
    const std::string bytes = read_file(sc.dir / out.at("file"));
    CHECK(bytes.size() == out.at("bytes").get<std::size_t>());
    CHECK(gtdcli::sha256_hex(bytes) == out.at("sha256").get<std::string>());
  }
}

TEST_CASE("geodesics: two identical runs are byte-identical") {
  Scratch sc("geo_repro");
  std::ofstream(sc.path("cfg.json"))
      << R"({"a": 1.0, "b": 0.05, "u0_range": "0:140:6",
            "formats": ["csv", "json", "svg"], "rtol": 1e-8})";
  CHECK(run_cli("geodesics --config " + sc.path("cfg.json") + " --out " +
                sc.path("r1")) == 0);
  CHECK(run_cli("geodesics --config " + sc.path("cfg.json") + " --out " +
                sc.path("r2")) == 0);

  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(sc.path("r1"))) {
    const std::string name = entry.path().filename().string();
    if (name == "manifest.json") continue;  // carries wall-clock duration
    CHECK(read_file(entry.path()) == read_file(sc.path("r2") + "/" + name));
    ++compared;
  }
  CHECK(compared == 8);  // 6 CSVs + report + svg
}

TEST_CASE("geodesics: flags override config values") {
  Scratch sc("geo_override");
  std::ofstream(sc.path("cfg.json"))
      << R"({"b": 0.05, "u0_range": "0:140:15", "v0": 0.1})";
  CHECK(run_cli("geodesics --config " + sc.path("cfg.json") +
                " --b 0.02 --u0-range 5:20:2 --out " + sc.path("out")) == 0);
  const json manifest = read_json(sc.path("out") + "/manifest.json");
  CHECK(manifest.at("config").at("b") == 0.02);
  CHECK(manifest.at("config").at("u0_range") == "5:20:2");
  CHECK(manifest.at("config").at("v0") == 0.1);  // config survives for v0
}

TEST_CASE("geodesics: empty sweep yields an empty item list and exit 0") {
  Scratch sc("geo_empty");
  CHECK(run_cli("geodesics --b 0.05 --u0-range 0:1:0 --out " +
                sc.dir.string()) == 0);
  const json report = read_json(sc.path("geodesics_report.json"));
  CHECK(report.at("items").is_array());
  CHECK(report.at("items").empty());
}

TEST_CASE("geodesics: per-item failures set exit code 1 and are recorded") {
  Scratch sc("geo_fail");
  // V(0) below the covolume is an invalid initial state for every item
  CHECK(run_cli("geodesics --b 0.05 --v0 0.01 --u0-range 0:10:2 --out " +
                sc.dir.string()) == 1);
  const json report = read_json(sc.path("geodesics_report.json"));
  REQUIRE(report.at("items").size() == 2);
  for (const json& item : report.at("items")) {
    CHECK(item.at("error").is_string());
    CHECK(!item.contains("classification"));
  }
}

TEST_CASE("geodesics: json-only format suppresses trajectory CSVs") {
  Scratch sc("geo_jsononly");
  CHECK(run_cli("geodesics --b 0.05 --u0-range 10:20:2 --format json "
                "--out " +
                sc.dir.string()) == 0);
  CHECK(fs::exists(sc.path("geodesics_report.json")));
  CHECK(!fs::exists(sc.path("geodesic_000.csv")));
  CHECK(!fs::exists(sc.path("geodesics.svg")));
}

TEST_CASE("locus: critical pressure reports the tangential double root") {
  Scratch sc("locus_crit");
  CHECK(run_cli("locus --a 1 --b 1 --pressure 0.037037037037037035 --out " +
                sc.dir.string()) == 0);
  const json out = read_json(sc.path("locus.json"));
  REQUIRE(out.at("roots").size() == 1);
  const json& root = out.at("roots")[0];
  CHECK(std::abs(root.at("V").get<double>() - 3.0) < 1e-6);
  CHECK(root.at("multiplicity") == 2);
  CHECK(root.at("residual").get<double>() < 1e-10);
  CHECK(out.at("critical").at("volume") == 3.0);
  CHECK(std::abs(out.at("critical").at("pressure").get<double>() -
                 1.0 / 27.0) < 1e-15);
}

TEST_CASE("locus: supercritical pressure has no roots") {
  Scratch sc("locus_none");
  CHECK(run_cli("locus --a 1 --b 1 --pressure 0.75 --out " +
                sc.dir.string()) == 0);
  const json out = read_json(sc.path("locus.json"));
  CHECK(out.at("roots").empty());
}

TEST_CASE("locus: zero covolume factorizes and reports no critical data") {
  Scratch sc("locus_b0");
  CHECK(run_cli("locus --a 1 --b 0 --pressure 1 --out " + sc.dir.string()) ==
        0);
  const json out = read_json(sc.path("locus.json"));
  REQUIRE(out.at("roots").size() == 1);
  CHECK(std::abs(out.at("roots")[0].at("V").get<double>() - 1.0) < 1e-10);
  CHECK(out.at("critical").is_null());
}

TEST_CASE("locus: non-positive pressure is a validation error") {
  Scratch sc("locus_bad");
  CHECK(run_cli("locus --a 1 --b 1 --pressure -0.5 --out " + sc.dir.string(),
                sc.path("err.txt")) == 2);
  CHECK(read_file(sc.path("err.txt")).find("positive") != std::string::npos);
}

TEST_CASE("legendre: invariant family passes, reference metrics fail") {
  Scratch sc("leg_verdicts");
  const auto verdict = [&](const std::string& metric) {
    CHECK(run_cli("legendre --metric " + metric + " --out " +
                  sc.path(metric)) == 0);
    return read_json(sc.path(metric) + "/legendre.json");
  };

  const json first = verdict("gtd-first-order");
  CHECK(first.at("verdict") == "PASS");
  CHECK(first.at("max_rel_deviation").get<double>() < 1e-9);
  CHECK(first.at("trials") == 100);

  const json second = verdict("gtd-second-order");
  CHECK(second.at("verdict") == "PASS");

  const json hessian = verdict("hessian");
  CHECK(hessian.at("verdict") == "FAIL");
  CHECK(hessian.at("max_rel_deviation").get<double>() > 1e-3);

  const json flat = verdict("flat");
  CHECK(flat.at("verdict") == "FAIL");
  CHECK(flat.at("max_rel_deviation").get<double>() > 1e-3);
}

TEST_CASE("legendre: identical seeds reproduce the verdict bytes") {
  Scratch sc("leg_seed");
  CHECK(run_cli("legendre --seed 7 --trials 50 --out " + sc.path("s1")) == 0);
  CHECK(run_cli("legendre --seed 7 --trials 50 --out " + sc.path("s2")) == 0);
  CHECK(read_file(sc.path("s1") + "/legendre.json") ==
        read_file(sc.path("s2") + "/legendre.json"));
}

TEST_CASE("config validation: unknown keys and malformed JSON are rejected") {
  Scratch sc("cfg_bad");
  std::ofstream(sc.path("unknown.json")) << R"({"bogus_key": 1})";
  CHECK(run_cli("legendre --config " + sc.path("unknown.json") + " --out " +
                    sc.path("out"),
                sc.path("err1.txt")) == 2);
  CHECK(read_file(sc.path("err1.txt")).find("bogus_key") !=
        std::string::npos);

  std::ofstream(sc.path("broken.json")) << "{ not json";
  CHECK(run_cli("locus --pressure 1 --config " + sc.path("broken.json") +
                    " --out " + sc.path("out"),
                sc.path("err2.txt")) == 2);

  std::ofstream(sc.path("wrongtype.json")) << R"({"v0": "fast"})";
  CHECK(run_cli("geodesics --config " + sc.path("wrongtype.json") +
                    " --out " + sc.path("out"),
                sc.path("err3.txt")) == 2);
}

TEST_CASE("argument errors come back as nonzero exit codes") {
  Scratch sc("arg_errors");
  CHECK(run_cli("") != 0);                      // subcommand required
  CHECK(run_cli("unknown-subcommand") != 0);
  CHECK(run_cli("geodesics --format tiff --out " + sc.dir.string()) != 0);
  CHECK(run_cli("geodesics --u0-range nonsense --out " + sc.dir.string()) ==
        2);
  CHECK(run_cli("geodesics --rtol 0 --b 0.05 --out " + sc.dir.string()) == 2);
  CHECK(run_cli("locus --out " + sc.dir.string()) == 2);  // pressure missing
  CHECK(run_cli("legendre --metric bogus --out " + sc.dir.string()) == 2);
  CHECK(run_cli("curvature --a -1 --out " + sc.dir.string()) == 2);
}
