#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "archam/io.hpp"
#include "archam/measure.hpp"

namespace archam {

enum class CaseKind { Pendulum, Scalar1, Simplex3, FlowNormal, FlowCauchy, FlowCustom, Verify };

CaseKind case_from_string(const std::string& name);
std::string to_string(CaseKind kind);

enum class OutputFormat { Csv, Json, Svg };

std::set<OutputFormat> formats_from_string(const std::string& comma_list);

// Effective run parameters. Defaults select the canonical flow setup: grid
// [-10, 10) with 2000 cells, weight exponent 2, delta 0.001, horizon 3,
// snapshots at t = 0, 1, 2, 3.
struct RunConfig {
  CaseKind case_kind = CaseKind::Verify;

  double grid_min = -10.0;
  double grid_max = 10.0;
  std::size_t grid_n = 2000;
  double weight_p = 2.0;
  double delta = 0.001;
  double t_max = 3.0;
  std::vector<double> snapshots = {0.0, 1.0, 2.0, 3.0};
  DomainMode domain_mode = DomainMode::Warn;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = "out";
  std::set<OutputFormat> formats = {OutputFormat::Csv, OutputFormat::Json};
  bool parallel = false;

  // config-file-only knobs
  double tolerance_scale = 1.0;       // verify: scales every check tolerance
  std::string initial_csv;            // flow-custom: initial state table (theta,f,p)
  double scalar_f_max = 5.0;          // scalar1 lattice is (0, f_max] x (0, p_max]
  double scalar_p_max = 5.0;
  std::size_t scalar_lattice_n = 200;
  std::size_t simplex_subdivisions = 20;

  JsonValue echo() const;  // every effective parameter, defaults included
};

// Applies values from a flat JSON config document onto cfg. CLI flags are
// applied afterwards by the caller, so the precedence is
// defaults < config file < flags.
void apply_config_file(RunConfig& cfg, const std::filesystem::path& file);

struct RunArtifacts {
  JsonValue manifest;
  std::vector<std::filesystem::path> files;
  int exit_code = 0;
};

struct OutputData {
  std::vector<CsvTable> tables;
  std::vector<std::pair<std::string, JsonValue>> documents;
  std::vector<SvgPlot> plots;
};

// Writes the requested formats under out_dir and assembles the manifest:
// {config, versions, timestamp, digests, checks}. Every emitted file is
// listed with its sha256 digest. The timestamp honours SOURCE_DATE_EPOCH so
// runs can be made byte-reproducible end to end.
RunArtifacts emit_outputs(const OutputData& data, const std::set<OutputFormat>& formats,
                          const std::filesystem::path& out_dir, const JsonValue& config_echo,
                          const JsonValue& checks);

// Executes one case with the configured (or default) parameters and writes
// its artifacts. The verify case delegates to run_verify_suite.
RunArtifacts run_case(const RunConfig& cfg);

struct CheckResult {
  std::string name;
  bool passed = false;
  double tolerance = 0.0;
  double observed = 0.0;
  std::string details;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  std::uint64_t seed = 0;
  bool passed = false;
};

// Runs every numerically testable invariant: domain checks, first-variation
// verification, saddle inequalities, Donsker-Varadhan residuals,
// compatibility sweeps, convergence orders on the pendulum and both flow
// presets, arc-residual decay, constant-shift invariance, the Jensen bound,
// the Gibbs variational principle, and a byte-determinism probe.
VerifyReport verify_suite(const RunConfig& cfg);

// writes report.json plus the manifest; exit code 1 when a check failed
RunArtifacts emit_verify_report(const VerifyReport& report, const RunConfig& cfg);

// verify_suite plus emit_verify_report
RunArtifacts run_verify_suite(const RunConfig& cfg);

}  // namespace archam
