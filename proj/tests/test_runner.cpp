#include <cmath>
#include <cstdlib>
#include <filesystem>

#include <doctest.h>

#include "archam/io.hpp"
#include "archam/runner.hpp"
#include "archam/sha256.hpp"

using namespace archam;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

bool has_file(const RunArtifacts& artifacts, const std::string& name) {
  for (const auto& f : artifacts.files) {
    if (f.filename() == name) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE_BEGIN("runner");

TEST_CASE("simplex3 emits both vector fields with digests") {
  TempDir dir("archam_runner_simplex");
  RunConfig cfg;
  cfg.case_kind = CaseKind::Simplex3;
  cfg.out_dir = dir.path;
  cfg.simplex_subdivisions = 8;

  const RunArtifacts artifacts = run_case(cfg);
  CHECK(artifacts.exit_code == 0);
  CHECK(has_file(artifacts, "p_simplex_field.csv"));
  CHECK(has_file(artifacts, "f_simplex_field.csv"));
  CHECK(has_file(artifacts, "manifest.json"));

  const ParsedCsv field = parse_csv(read_text_file(dir.path / "p_simplex_field.csv"));
  CHECK(field.columns == std::vector<std::string>{"P1", "P2", "P3", "dP1", "dP2", "dP3"});
  CHECK(field.rows.size() == 45);  // (m+1)(m+2)/2 lattice points for m = 8
  for (const auto& row : field.rows) {
    CHECK(row[0] + row[1] + row[2] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(row[3] + row[4] + row[5] == doctest::Approx(0.0).epsilon(1e-9));
    // point masses are fixed points of the posterior map, so the field
    // vanishes exactly at the simplex vertices
    if (row[0] == 1.0 || row[1] == 1.0 || row[2] == 1.0) {
      CHECK(row[3] == 0.0);
      CHECK(row[4] == 0.0);
      CHECK(row[5] == 0.0);
    }
  }

  // manifest digests match the bytes on disk
  const std::string manifest = read_text_file(dir.path / "manifest.json");
  const std::string csv_digest = sha256_hex(read_text_file(dir.path / "p_simplex_field.csv"));
  CHECK(manifest.find(csv_digest) != std::string::npos);
}

TEST_CASE("scalar1 contour matches the closed scalar form") {
  TempDir dir("archam_runner_scalar");
  RunConfig cfg;
  cfg.case_kind = CaseKind::Scalar1;
  cfg.out_dir = dir.path;
  cfg.scalar_lattice_n = 10;
  cfg.formats = {OutputFormat::Csv};

  const RunArtifacts artifacts = run_case(cfg);
  CHECK(artifacts.files.size() == 1);

  const ParsedCsv contour = parse_csv(read_text_file(dir.path / "contour.csv"));
  CHECK(contour.columns == std::vector<std::string>{"f", "P", "H"});
  CHECK(contour.rows.size() == 100);
  for (const auto& row : contour.rows) {
    const double expected = row[0] * (1.0 - row[1]) - std::log(row[1]);
    CHECK(row[2] == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("flow case with zero horizon snapshots the initial state") {
  TempDir dir("archam_runner_flow0");
  RunConfig cfg;
  cfg.case_kind = CaseKind::FlowNormal;
  cfg.out_dir = dir.path;
  cfg.grid_n = 64;
  cfg.t_max = 0.0;

  const RunArtifacts artifacts = run_case(cfg);
  CHECK(has_file(artifacts, "snapshot_t0.csv"));
  CHECK(has_file(artifacts, "energy.csv"));

  const ParsedCsv snap = parse_csv(read_text_file(dir.path / "snapshot_t0.csv"));
  CHECK(snap.columns == std::vector<std::string>{"theta", "f", "p"});
  CHECK(snap.rows.size() == 64);
  // initial density is the standard normal at the left endpoints
  const double theta0 = snap.rows[0][0];
  CHECK(theta0 == -10.0);
}

TEST_CASE("identical configs produce byte-identical outputs") {
  setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  TempDir dir_a("archam_runner_det_a");
  TempDir dir_b("archam_runner_det_b");

  RunConfig cfg;
  cfg.case_kind = CaseKind::FlowCauchy;
  cfg.grid_n = 64;
  cfg.delta = 0.01;
  cfg.t_max = 0.2;
  cfg.snapshots = {0.0, 0.2};
  cfg.formats = {OutputFormat::Csv, OutputFormat::Json, OutputFormat::Svg};

  cfg.out_dir = dir_a.path;
  const RunArtifacts a = run_case(cfg);
  cfg.out_dir = dir_b.path;
  const RunArtifacts b = run_case(cfg);
  unsetenv("SOURCE_DATE_EPOCH");

  REQUIRE(a.files.size() == b.files.size());
  for (std::size_t i = 0; i < a.files.size(); ++i) {
    CHECK(a.files[i].filename() == b.files[i].filename());
    // the manifests echo different out_dir values here; all data files must
    // be byte-identical
    if (a.files[i].filename() == "manifest.json") continue;
    CHECK(read_text_file(a.files[i]) == read_text_file(b.files[i]));
  }

  // with identical configs the manifests agree byte for byte as well
  cfg.out_dir = dir_a.path;
  setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  const RunArtifacts a2 = run_case(cfg);
  unsetenv("SOURCE_DATE_EPOCH");
  CHECK(a2.manifest.dump() == a.manifest.dump());
}

TEST_CASE("pendulum case emits portrait and energy tables") {
  TempDir dir("archam_runner_pendulum");
  RunConfig cfg;
  cfg.case_kind = CaseKind::Pendulum;
  cfg.out_dir = dir.path;
  cfg.delta = 0.01;
  cfg.t_max = 0.5;
  cfg.snapshots = {0.0, 0.5};
  cfg.formats = {OutputFormat::Csv, OutputFormat::Svg};

  const RunArtifacts artifacts = run_case(cfg);
  CHECK(has_file(artifacts, "portrait.csv"));
  CHECK(has_file(artifacts, "energy.csv"));
  CHECK(has_file(artifacts, "portrait.svg"));

  const ParsedCsv portrait = parse_csv(read_text_file(dir.path / "portrait.csv"));
  CHECK(portrait.columns == std::vector<std::string>{"traj", "t", "x", "z", "H"});
  CHECK(portrait.rows.size() > 35);  // 7 x 5 initial states, several rows each
}

TEST_CASE("flow-custom reads an initial table and requires the key") {
  TempDir dir("archam_runner_custom");
  const fs::path table = dir.path / "initial.csv";
  CsvTable initial{"initial", "theta,f,p", {}};
  for (int i = 0; i < 16; ++i) {
    const double theta = -2.0 + 0.25 * i;
    initial.rows.push_back({theta, 1.0 + theta * theta / 4.0, 0.25});
  }
  write_text_file(table, initial.render());

  RunConfig cfg;
  cfg.case_kind = CaseKind::FlowCustom;
  cfg.out_dir = dir.path / "out";
  cfg.delta = 0.01;
  cfg.t_max = 0.1;
  cfg.snapshots = {0.0, 0.1};
  cfg.initial_csv = table.string();

  const RunArtifacts artifacts = run_case(cfg);
  CHECK(has_file(artifacts, "snapshot_t0.csv"));
  CHECK(has_file(artifacts, "snapshot_t0.1.csv"));

  RunConfig missing = cfg;
  missing.initial_csv.clear();
  CHECK_THROWS_AS(run_case(missing), std::invalid_argument);
}

TEST_CASE("config file merges under CLI precedence") {
  TempDir dir("archam_runner_cfg");
  const fs::path file = dir.path / "run.json";
  write_text_file(file, R"({"delta": 0.25, "grid-n": 50, "domain-mode": "off",
                            "format": "csv,svg", "snapshots": [0.0, 0.5]})");

  RunConfig cfg;
  apply_config_file(cfg, file);
  CHECK(cfg.delta == 0.25);
  CHECK(cfg.grid_n == 50);
  CHECK(cfg.domain_mode == DomainMode::Off);
  CHECK(cfg.formats == std::set<OutputFormat>{OutputFormat::Csv, OutputFormat::Svg});
  CHECK(cfg.snapshots == std::vector<double>{0.0, 0.5});

  // a later (CLI-sourced) assignment wins
  cfg.delta = 0.125;
  CHECK(cfg.delta == 0.125);

  write_text_file(file, R"({"no-such-key": 1})");
  CHECK_THROWS_AS(apply_config_file(cfg, file), std::invalid_argument);
  write_text_file(file, "[1, 2]");
  CHECK_THROWS_AS(apply_config_file(cfg, file), std::invalid_argument);
  write_text_file(file, "{broken");
  CHECK_THROWS_AS(apply_config_file(cfg, file), std::invalid_argument);
}

TEST_CASE("verify suite reports named failures under zero tolerance") {
  TempDir dir("archam_runner_verify");
  RunConfig cfg;
  cfg.case_kind = CaseKind::Verify;
  cfg.out_dir = dir.path;
  cfg.grid_n = 100;
  cfg.t_max = 0.3;
  cfg.tolerance_scale = 0.0;

  const RunArtifacts artifacts = run_case(cfg);
  CHECK(artifacts.exit_code == 1);
  CHECK(has_file(artifacts, "report.json"));

  const std::string report = read_text_file(dir.path / "report.json");
  CHECK(report.find("\"passed\": false") != std::string::npos);
  CHECK(report.find("donsker_varadhan.simplex3") != std::string::npos);
  CHECK(report.find("convergence.pendulum") != std::string::npos);
}

TEST_CASE("verify verdicts are stable across seeds") {
  RunConfig cfg;
  cfg.case_kind = CaseKind::Verify;
  cfg.grid_n = 100;
  cfg.t_max = 0.3;

  cfg.seed = 1;
  const VerifyReport a = verify_suite(cfg);
  cfg.seed = 2;
  const VerifyReport b = verify_suite(cfg);

  REQUIRE(a.checks.size() == b.checks.size());
  bool any_observed_differs = false;
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    CHECK(a.checks[i].passed == b.checks[i].passed);
    if (a.checks[i].observed != b.checks[i].observed) any_observed_differs = true;
  }
  // different seeds really did sample different directions somewhere
  CHECK(any_observed_differs);
}

TEST_CASE("parallel verify matches the sequential verdicts") {
  RunConfig cfg;
  cfg.case_kind = CaseKind::Verify;
  cfg.grid_n = 100;
  cfg.t_max = 0.3;

  const VerifyReport sequential = verify_suite(cfg);
  cfg.parallel = true;
  const VerifyReport parallel = verify_suite(cfg);

  REQUIRE(sequential.checks.size() == parallel.checks.size());
  for (std::size_t i = 0; i < sequential.checks.size(); ++i) {
    CHECK(sequential.checks[i].name == parallel.checks[i].name);
    CHECK(sequential.checks[i].passed == parallel.checks[i].passed);
    CHECK(sequential.checks[i].observed == parallel.checks[i].observed);
  }
}

TEST_CASE("format selection controls emitted files") {
  TempDir dir("archam_runner_formats");
  RunConfig cfg;
  cfg.case_kind = CaseKind::Simplex3;
  cfg.out_dir = dir.path;
  cfg.simplex_subdivisions = 4;
  cfg.formats = {OutputFormat::Csv};

  const RunArtifacts artifacts = run_case(cfg);
  for (const auto& f : artifacts.files) {
    CHECK(f.extension() == ".csv");
  }
  CHECK_FALSE(fs::exists(dir.path / "manifest.json"));
  // the manifest is still assembled in memory
  CHECK(artifacts.manifest.dump().find("digests") != std::string::npos);
}

TEST_CASE("case and format names parse") {
  CHECK(case_from_string("flow-normal") == CaseKind::FlowNormal);
  CHECK(to_string(CaseKind::FlowCauchy) == "flow-cauchy");
  CHECK_THROWS_AS(case_from_string("nope"), std::invalid_argument);
  CHECK(formats_from_string("csv,json,svg").size() == 3);
  CHECK_THROWS_AS(formats_from_string("yaml"), std::invalid_argument);
  CHECK_THROWS_AS(formats_from_string(""), std::invalid_argument);
}

TEST_SUITE_END();
