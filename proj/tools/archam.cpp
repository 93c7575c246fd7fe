// archam: arc Hamiltonian flows of the minimum free energy on grids.
//
// Exit codes: 0 success, 1 verify-check failure, 2 usage error,
// 3 runtime or numeric abort.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "archam/arc_flow.hpp"
#include "archam/runner.hpp"
#include "archam/version.hpp"

namespace {

struct CliOptions {
  std::string grid_min, grid_max, grid_n, weight_p, delta, t_max;
  std::string snapshots, domain_mode, seed, out_dir, formats, config;
  bool parallel = false;
};

std::vector<double> parse_snapshot_list(const std::string& list) {
  std::vector<double> times;
  std::string token;
  std::istringstream in(list);
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    std::size_t used = 0;
    const double t = std::stod(token, &used);
    if (used != token.size()) throw CLI::ValidationError("--snapshots", "not a number: " + token);
    times.push_back(t);
  }
  return times;
}

// flags override config-file values, which override defaults
void apply_cli(archam::RunConfig& cfg, const CliOptions& opt) {
  if (!opt.grid_min.empty()) cfg.grid_min = std::stod(opt.grid_min);
  if (!opt.grid_max.empty()) cfg.grid_max = std::stod(opt.grid_max);
  if (!opt.grid_n.empty()) cfg.grid_n = std::stoull(opt.grid_n);
  if (!opt.weight_p.empty()) cfg.weight_p = std::stod(opt.weight_p);
  if (!opt.delta.empty()) cfg.delta = std::stod(opt.delta);
  if (!opt.t_max.empty()) cfg.t_max = std::stod(opt.t_max);
  if (!opt.snapshots.empty()) cfg.snapshots = parse_snapshot_list(opt.snapshots);
  if (!opt.domain_mode.empty()) cfg.domain_mode = archam::domain_mode_from_string(opt.domain_mode);
  if (!opt.seed.empty()) cfg.seed = std::stoull(opt.seed);
  if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
  if (!opt.formats.empty()) cfg.formats = archam::formats_from_string(opt.formats);
  if (opt.parallel) cfg.parallel = true;
}

void add_common_flags(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--grid-min", opt.grid_min, "left grid bound");
  cmd->add_option("--grid-max", opt.grid_max, "right grid bound (excluded)");
  cmd->add_option("--grid-n", opt.grid_n, "number of grid cells");
  cmd->add_option("--weight-p", opt.weight_p, "weight exponent p in w = 1 + |theta|^p");
  cmd->add_option("--delta", opt.delta, "integration step size");
  cmd->add_option("--t-max", opt.t_max, "integration horizon");
  cmd->add_option("--snapshots", opt.snapshots, "comma-separated snapshot times");
  cmd->add_option("--domain-mode", opt.domain_mode, "strict|warn|off")
      ->check(CLI::IsMember({"strict", "warn", "off"}));
  cmd->add_option("--seed", opt.seed, "random seed for sampled checks");
  cmd->add_option("--out", opt.out_dir, "output directory");
  cmd->add_option("--format", opt.formats, "comma-separated subset of csv,json,svg");
  cmd->add_option("--config", opt.config, "flat JSON config file; flags take precedence");
  cmd->add_flag("--parallel", opt.parallel, "run independent verify checks concurrently");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"arc Hamiltonian flows of the minimum free energy"};
  app.set_version_flag("--version", std::string("archam ") + archam::kVersion);
  app.require_subcommand(1);

  const char* cases[] = {"pendulum", "scalar1", "simplex3", "flow-normal",
                         "flow-cauchy", "flow-custom", "verify"};
  const char* descriptions[] = {
      "simple-pendulum sanity system with the same first-order scheme",
      "extended scalar H over a (f, P) lattice on the single-atom grid",
      "symplectic-variation vector fields on the three-label simplex",
      "normal location-model flow with the canonical defaults",
      "Cauchy location-model flow with the canonical defaults",
      "flow from a user-supplied theta,f,p table (config key initial-csv)",
      "run every numerically testable invariant and emit a report"};

  std::map<std::string, CliOptions> options;
  for (std::size_t i = 0; i < std::size(cases); ++i) {
    CLI::App* cmd = app.add_subcommand(cases[i], descriptions[i]);
    add_common_flags(cmd, options[cases[i]]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string case_name = app.get_subcommands().front()->get_name();
  const CliOptions& opt = options[case_name];

  try {
    archam::RunConfig cfg;
    cfg.case_kind = archam::case_from_string(case_name);
    if (!opt.config.empty()) archam::apply_config_file(cfg, opt.config);
    apply_cli(cfg, opt);
    cfg.case_kind = archam::case_from_string(case_name);  // subcommand wins over config

    archam::RunArtifacts artifacts;
    if (cfg.case_kind == archam::CaseKind::Verify) {
      const archam::VerifyReport report = archam::verify_suite(cfg);
      for (const auto& check : report.checks) {
        std::printf("%s %-32s tol=%g observed=%g%s%s\n", check.passed ? "PASS" : "FAIL",
                    check.name.c_str(), check.tolerance, check.observed,
                    check.details.empty() ? "" : "  ", check.details.c_str());
      }
      artifacts = archam::emit_verify_report(report, cfg);
    } else {
      artifacts = archam::run_case(cfg);
    }
    for (const auto& file : artifacts.files) {
      std::printf("wrote %s\n", file.string().c_str());
    }
    if (artifacts.exit_code != 0) {
      std::fprintf(stderr, "verify: one or more checks failed (see report)\n");
    }
    return artifacts.exit_code;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const archam::FlowAbort& e) {
    std::fprintf(stderr, "numeric abort: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
