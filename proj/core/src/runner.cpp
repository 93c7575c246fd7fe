#include "archam/runner.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "archam/arc_flow.hpp"
#include "archam/free_energy.hpp"
#include "archam/pendulum.hpp"
#include "archam/presets.hpp"
#include "archam/sha256.hpp"
#include "archam/version.hpp"

namespace archam {

namespace {

using nlohmann::json;

std::string format_time_suffix(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", t);
  return buf;
}

// ISO-8601 UTC; SOURCE_DATE_EPOCH overrides the clock for reproducible runs
std::string timestamp_utc() {
  std::time_t now = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    now = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  }
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

// snapshot table: theta, f and the density view p = weight / cell_width
CsvTable snapshot_table(const std::string& name, const State& s) {
  CsvTable table;
  table.name = name;
  table.header = "theta,f,p";
  const Grid& grid = *s.grid();
  table.rows.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    table.rows.push_back({grid.point(i), s.f().value(i), s.p().weight(i) / grid.cell_width()});
  }
  return table;
}

CsvTable energy_table(const std::vector<std::pair<double, double>>& series) {
  CsvTable table;
  table.name = "energy";
  table.header = "t,H";
  table.rows.reserve(series.size());
  for (const auto& [t, h] : series) table.rows.push_back({t, h});
  return table;
}

SvgPlot energy_plot(const std::vector<std::pair<double, double>>& series) {
  SvgPlot plot;
  plot.name = "energy";
  plot.title = "energy along the flow";
  plot.x_label = "t";
  plot.y_label = "H";
  SvgSeries line;
  line.points = series;
  plot.series.push_back(std::move(line));
  return plot;
}

JsonValue domain_json(const DomainReport& report) {
  JsonValue j = JsonValue::object();
  j.set("mode", to_string(report.mode));
  j.set("probability_ok", report.probability_ok);
  j.set("total_mass", report.total_mass);
  j.set("pointwise_violations", report.violations.size());
  j.set("worst_gap", report.worst_gap);
  return j;
}

IntegratorConfig integrator_config(const RunConfig& cfg) {
  IntegratorConfig icfg;
  icfg.delta = cfg.delta;
  icfg.t_max = cfg.t_max;
  icfg.snapshot_times.clear();
  // snapshot times outside [0, t_max] are dropped so a shortened horizon
  // still works with the default snapshot list
  for (double t : cfg.snapshots) {
    if (t >= 0.0 && t <= cfg.t_max) icfg.snapshot_times.push_back(t);
  }
  if (icfg.snapshot_times.empty()) icfg.snapshot_times.push_back(0.0);
  icfg.record_energy_every = 1;
  icfg.weight_p = cfg.weight_p;
  icfg.domain_mode = cfg.domain_mode;
  return icfg;
}

RunArtifacts run_flow_case(const RunConfig& cfg, const State& s0) {
  const Trajectory traj = integrate_flow(s0, integrator_config(cfg));

  OutputData data;
  data.tables.push_back(energy_table(traj.energy_series));
  for (const auto& [t, state] : traj.snapshots) {
    data.tables.push_back(snapshot_table("snapshot_t" + format_time_suffix(t), state));
  }

  SvgPlot f_plot{"f_curves", "negative log-likelihood f_t", "theta", "f", {}};
  SvgPlot p_plot{"p_curves", "density p_t", "theta", "p", {}};
  for (const auto& [t, state] : traj.snapshots) {
    SvgSeries fs, ps;
    const Grid& grid = *state.grid();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      fs.points.emplace_back(grid.point(i), state.f().value(i));
      ps.points.emplace_back(grid.point(i), state.p().weight(i) / grid.cell_width());
    }
    f_plot.series.push_back(std::move(fs));
    p_plot.series.push_back(std::move(ps));
  }
  data.plots.push_back(std::move(f_plot));
  data.plots.push_back(std::move(p_plot));
  data.plots.push_back(energy_plot(traj.energy_series));

  JsonValue checks = JsonValue::object();
  checks.set("energy_drift", energy_drift(traj));
  checks.set("initial_energy", traj.energy_series.front().second);
  checks.set("domain", domain_json(traj.initial_domain));

  return emit_outputs(data, cfg.formats, cfg.out_dir, cfg.echo(), checks);
}

RunArtifacts run_simplex3_case(const RunConfig& cfg) {
  const State base = presets::three_label_state();
  const GridPtr grid = base.grid();
  const std::size_t m = cfg.simplex_subdivisions;
  if (m == 0) throw std::invalid_argument("simplex3: subdivisions must be positive");

  CsvTable p_field{"p_simplex_field", "P1,P2,P3,dP1,dP2,dP3", {}};
  CsvTable f_field{"f_simplex_field", "f1,f2,f3,df1,df2,df3", {}};

  // barycentric projection for the svg: vertices (0,0), (1,0), (1/2, sqrt3/2);
  // the first coordinate is implied by the other two
  auto project = [](double, double b, double c) {
    return std::pair<double, double>{b + 0.5 * c, std::numbers::sqrt3 / 2.0 * c};
  };
  SvgSeries p_arrows, f_arrows;
  p_arrows.is_segment = true;
  f_arrows.is_segment = true;
  constexpr double kArrowScale = 0.15;

  for (std::size_t i = 0; i <= m; ++i) {
    for (std::size_t j = 0; i + j <= m; ++j) {
      const std::size_t k = m - i - j;
      const double a = static_cast<double>(i) / static_cast<double>(m);
      const double b = static_cast<double>(j) / static_cast<double>(m);
      const double c = static_cast<double>(k) / static_cast<double>(m);

      // first variation d1 H = P* - P over the probability simplex, f0 fixed
      {
        const Measure p = Measure::from_weights(grid, {a, b, c});
        const SymplecticVariation var = symplectic_variation(State(base.f(), p));
        p_field.rows.push_back({a, b, c, var.p_dir[0], var.p_dir[1], var.p_dir[2]});
        const auto [x, y] = project(a, b, c);
        const auto [xt, yt] = project(a + kArrowScale * var.p_dir[0], b + kArrowScale * var.p_dir[1],
                                      c + kArrowScale * var.p_dir[2]);
        p_arrows.points.emplace_back(x, y);
        p_arrows.points.emplace_back(xt, yt);
      }
      // first variation -d2 H = f* + f over the f-simplex, P0 fixed
      {
        const Potential f(grid, {a, b, c});
        const SymplecticVariation var = symplectic_variation(State(f, base.p()));
        f_field.rows.push_back(
            {a, b, c, var.f_dir.value(0), var.f_dir.value(1), var.f_dir.value(2)});
        const auto [x, y] = project(a, b, c);
        const auto [xt, yt] =
            project(a + kArrowScale * var.f_dir.value(0), b + kArrowScale * var.f_dir.value(1),
                    c + kArrowScale * var.f_dir.value(2));
        f_arrows.points.emplace_back(x, y);
        f_arrows.points.emplace_back(xt, yt);
      }
    }
  }

  OutputData data;
  data.tables.push_back(std::move(p_field));
  data.tables.push_back(std::move(f_field));

  SvgSeries boundary;
  boundary.points = {{0.0, 0.0}, {1.0, 0.0}, {0.5, std::numbers::sqrt3 / 2.0}, {0.0, 0.0}};
  for (auto [name, title, arrows] :
       {std::tuple<const char*, const char*, SvgSeries*>{"p_simplex_field",
                                                         "first variation over the P simplex",
                                                         &p_arrows},
        std::tuple<const char*, const char*, SvgSeries*>{"f_simplex_field",
                                                         "negated second variation over the f simplex",
                                                         &f_arrows}}) {
    SvgPlot plot;
    plot.name = name;
    plot.title = title;
    plot.x_label = "barycentric x";
    plot.y_label = "barycentric y";
    plot.series.push_back(boundary);
    plot.series.push_back(*arrows);
    data.plots.push_back(std::move(plot));
  }

  const SymplecticVariation at_base = symplectic_variation(base);
  JsonValue checks = JsonValue::object();
  checks.set("H_at_preset", minimum_free_energy(base.f(), base.p()));
  JsonValue p_dir = JsonValue::array();
  for (double v : at_base.p_dir) p_dir.push_back(v);
  checks.set("p_dir_at_preset", std::move(p_dir));

  return emit_outputs(data, cfg.formats, cfg.out_dir, cfg.echo(), checks);
}

RunArtifacts run_scalar1_case(const RunConfig& cfg) {
  const std::size_t n = cfg.scalar_lattice_n;
  if (n == 0) throw std::invalid_argument("scalar1: lattice size must be positive");
  if (!(cfg.scalar_f_max > 0.0) || !(cfg.scalar_p_max > 0.0)) {
    throw std::invalid_argument("scalar1: lattice bounds must be positive");
  }

  CsvTable contour{"contour", "f,P,H", {}};
  contour.rows.reserve(n * n);
  for (std::size_t i = 1; i <= n; ++i) {
    const double f = static_cast<double>(i) * cfg.scalar_f_max / static_cast<double>(n);
    for (std::size_t j = 1; j <= n; ++j) {
      const double p = static_cast<double>(j) * cfg.scalar_p_max / static_cast<double>(n);
      contour.rows.push_back({f, p, presets::scalar_free_energy(f, p)});
    }
  }

  // flow arrows on a coarse sublattice: direction (f* + f, P* - P) = (1/P + f, 1 - P)
  SvgSeries arrows;
  arrows.is_segment = true;
  const std::size_t stride = std::max<std::size_t>(1, n / 20);
  constexpr double kArrowScale = 0.02;
  for (std::size_t i = stride; i <= n; i += stride) {
    const double f = static_cast<double>(i) * cfg.scalar_f_max / static_cast<double>(n);
    for (std::size_t j = stride; j <= n; j += stride) {
      const double p = static_cast<double>(j) * cfg.scalar_p_max / static_cast<double>(n);
      const double df = 1.0 / p + f;
      const double dp = 1.0 - p;
      arrows.points.emplace_back(f, p);
      arrows.points.emplace_back(f + kArrowScale * df, p + kArrowScale * dp);
    }
  }

  OutputData data;
  data.tables.push_back(std::move(contour));
  SvgPlot plot{"field", "flow direction of the extended H", "f", "P", {}};
  plot.series.push_back(std::move(arrows));
  data.plots.push_back(std::move(plot));

  JsonValue checks = JsonValue::object();
  checks.set("H_at_probability_unit_f", presets::scalar_free_energy(1.0, 1.0));

  return emit_outputs(data, cfg.formats, cfg.out_dir, cfg.echo(), checks);
}

RunArtifacts run_pendulum_case(const RunConfig& cfg) {
  IntegratorConfig icfg = integrator_config(cfg);

  // primary trajectory from (1, 0) at full cadence
  const PendulumTrajectory primary = integrate_pendulum(presets::default_pendulum_state(), icfg);

  // phase portrait sweep over [-pi, pi] x [-25, 25]
  CsvTable portrait{"portrait", "traj,t,x,z,H", {}};
  SvgPlot portrait_plot{"portrait", "pendulum phase portrait", "x", "z", {}};
  const auto n_steps = static_cast<std::size_t>(std::llround(cfg.t_max / cfg.delta));
  const std::size_t stride = std::max<std::size_t>(1, n_steps / 300);

  IntegratorConfig sweep_cfg = icfg;
  sweep_cfg.snapshot_times = {};
  sweep_cfg.record_energy_every = stride;

  int traj_id = 0;
  for (int xi = -3; xi <= 3; ++xi) {
    for (int zi = -2; zi <= 2; ++zi) {
      const PendulumState s0{static_cast<double>(xi) * std::numbers::pi / 3.0,
                             static_cast<double>(zi) * 12.5, kStandardGravity};
      PendulumState state = s0;
      SvgSeries curve;
      double prev_wrapped = 0.0;
      for (std::size_t step = 0; step <= n_steps; ++step) {
        if (step % stride == 0 || step == n_steps) {
          const double t = static_cast<double>(step) * cfg.delta;
          portrait.rows.push_back(
              {static_cast<double>(traj_id), t, state.angle, state.momentum, pendulum_energy(state)});
          // wrap the angle only at plot emission; split the polyline at jumps
          const double wrapped = std::remainder(state.angle, 2.0 * std::numbers::pi);
          if (!curve.points.empty() && std::fabs(wrapped - prev_wrapped) > std::numbers::pi) {
            if (curve.points.size() > 1) portrait_plot.series.push_back(std::move(curve));
            curve = SvgSeries{};
          }
          curve.points.emplace_back(wrapped, state.momentum);
          prev_wrapped = wrapped;
        }
        if (step == n_steps) break;
        state = pendulum_step(state, cfg.delta);
      }
      if (curve.points.size() > 1) portrait_plot.series.push_back(std::move(curve));
      ++traj_id;
    }
  }

  OutputData data;
  data.tables.push_back(energy_table(primary.energy_series));
  data.tables.push_back(std::move(portrait));
  data.plots.push_back(energy_plot(primary.energy_series));
  data.plots.push_back(std::move(portrait_plot));

  JsonValue checks = JsonValue::object();
  checks.set("energy_drift", energy_drift(primary.energy_series));
  checks.set("initial_energy", primary.energy_series.front().second);

  return emit_outputs(data, cfg.formats, cfg.out_dir, cfg.echo(), checks);
}

State load_custom_initial_state(const RunConfig& cfg) {
  if (cfg.initial_csv.empty()) {
    throw std::invalid_argument(
        "flow-custom: config key 'initial-csv' (a theta,f,p table) is required");
  }
  const ParsedCsv csv = parse_csv(read_text_file(cfg.initial_csv));
  if (csv.columns != std::vector<std::string>{"theta", "f", "p"}) {
    throw std::invalid_argument("flow-custom: initial table must have header theta,f,p");
  }
  if (csv.rows.empty()) throw std::invalid_argument("flow-custom: initial table is empty");

  const std::size_t n = csv.rows.size();
  std::vector<double> theta(n), f(n), density(n);
  for (std::size_t i = 0; i < n; ++i) {
    theta[i] = csv.rows[i][0];
    f[i] = csv.rows[i][1];
    density[i] = csv.rows[i][2];
  }

  GridPtr grid;
  if (n >= 2) {
    const double dtheta = theta[1] - theta[0];
    bool uniform = dtheta > 0.0;
    for (std::size_t i = 0; i + 1 < n && uniform; ++i) {
      if (std::fabs(theta[i + 1] - theta[i] - dtheta) > 1e-9) uniform = false;
    }
    grid = uniform ? build_uniform_grid(theta[0], theta[0] + dtheta * static_cast<double>(n), n)
                   : build_label_grid(theta);
  } else {
    grid = build_label_grid(theta);
  }

  std::vector<double> weights(n);
  for (std::size_t i = 0; i < n; ++i) weights[i] = density[i] * grid->cell_width();
  return State(Potential(grid, std::move(f)), Measure::from_weights(grid, weights));
}

}  // namespace

CaseKind case_from_string(const std::string& name) {
  if (name == "pendulum") return CaseKind::Pendulum;
  if (name == "scalar1") return CaseKind::Scalar1;
  if (name == "simplex3") return CaseKind::Simplex3;
  if (name == "flow-normal") return CaseKind::FlowNormal;
  if (name == "flow-cauchy") return CaseKind::FlowCauchy;
  if (name == "flow-custom") return CaseKind::FlowCustom;
  if (name == "verify") return CaseKind::Verify;
  throw std::invalid_argument("unknown case: " + name);
}

std::string to_string(CaseKind kind) {
  switch (kind) {
    case CaseKind::Pendulum: return "pendulum";
    case CaseKind::Scalar1: return "scalar1";
    case CaseKind::Simplex3: return "simplex3";
    case CaseKind::FlowNormal: return "flow-normal";
    case CaseKind::FlowCauchy: return "flow-cauchy";
    case CaseKind::FlowCustom: return "flow-custom";
    case CaseKind::Verify: return "verify";
  }
  return "verify";
}

std::set<OutputFormat> formats_from_string(const std::string& comma_list) {
  std::set<OutputFormat> formats;
  std::istringstream in(comma_list);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (token == "csv") {
      formats.insert(OutputFormat::Csv);
    } else if (token == "json") {
      formats.insert(OutputFormat::Json);
    } else if (token == "svg") {
      formats.insert(OutputFormat::Svg);
    } else if (!token.empty()) {
      throw std::invalid_argument("unknown output format: " + token);
    }
  }
  if (formats.empty()) throw std::invalid_argument("no output format selected");
  return formats;
}

JsonValue RunConfig::echo() const {
  JsonValue j = JsonValue::object();
  j.set("case", to_string(case_kind));
  JsonValue grid = JsonValue::object();
  grid.set("min", grid_min);
  grid.set("max", grid_max);
  grid.set("n", grid_n);
  j.set("grid", std::move(grid));
  j.set("weight_p", weight_p);
  j.set("delta", delta);
  j.set("t_max", t_max);
  JsonValue snaps = JsonValue::array();
  for (double t : snapshots) snaps.push_back(t);
  j.set("snapshots", std::move(snaps));
  j.set("domain_mode", to_string(domain_mode));
  j.set("seed", seed);
  j.set("out_dir", out_dir.string());
  std::string fmt;
  for (OutputFormat f : formats) {
    if (!fmt.empty()) fmt.push_back(',');
    fmt += f == OutputFormat::Csv ? "csv" : f == OutputFormat::Json ? "json" : "svg";
  }
  j.set("formats", fmt);
  j.set("parallel", parallel);
  j.set("tolerance_scale", tolerance_scale);
  if (case_kind == CaseKind::FlowCustom) j.set("initial_csv", initial_csv);
  if (case_kind == CaseKind::Scalar1) {
    j.set("scalar_f_max", scalar_f_max);
    j.set("scalar_p_max", scalar_p_max);
    j.set("scalar_lattice_n", scalar_lattice_n);
  }
  if (case_kind == CaseKind::Simplex3) j.set("simplex_subdivisions", simplex_subdivisions);
  return j;
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& file) {
  json doc;
  try {
    doc = json::parse(read_text_file(file));
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config file: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw std::invalid_argument("config file: expected a flat JSON object");

  for (const auto& [key, value] : doc.items()) {
    if (key == "case") {
      cfg.case_kind = case_from_string(value.get<std::string>());
    } else if (key == "grid-min") {
      cfg.grid_min = value.get<double>();
    } else if (key == "grid-max") {
      cfg.grid_max = value.get<double>();
    } else if (key == "grid-n") {
      cfg.grid_n = value.get<std::size_t>();
    } else if (key == "weight-p") {
      cfg.weight_p = value.get<double>();
    } else if (key == "delta") {
      cfg.delta = value.get<double>();
    } else if (key == "t-max") {
      cfg.t_max = value.get<double>();
    } else if (key == "snapshots") {
      cfg.snapshots = value.get<std::vector<double>>();
    } else if (key == "domain-mode") {
      cfg.domain_mode = domain_mode_from_string(value.get<std::string>());
    } else if (key == "seed") {
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "out") {
      cfg.out_dir = value.get<std::string>();
    } else if (key == "format") {
      cfg.formats = formats_from_string(value.get<std::string>());
    } else if (key == "parallel") {
      cfg.parallel = value.get<bool>();
    } else if (key == "tolerance-scale") {
      cfg.tolerance_scale = value.get<double>();
    } else if (key == "initial-csv") {
      cfg.initial_csv = value.get<std::string>();
    } else if (key == "scalar-f-max") {
      cfg.scalar_f_max = value.get<double>();
    } else if (key == "scalar-p-max") {
      cfg.scalar_p_max = value.get<double>();
    } else if (key == "scalar-lattice-n") {
      cfg.scalar_lattice_n = value.get<std::size_t>();
    } else if (key == "simplex-subdivisions") {
      cfg.simplex_subdivisions = value.get<std::size_t>();
    } else {
      throw std::invalid_argument("config file: unknown key '" + key + "'");
    }
  }
}

RunArtifacts emit_outputs(const OutputData& data, const std::set<OutputFormat>& formats,
                          const std::filesystem::path& out_dir, const JsonValue& config_echo,
                          const JsonValue& checks) {
  std::filesystem::create_directories(out_dir);

  RunArtifacts artifacts;
  JsonValue digests = JsonValue::object();

  auto emit = [&](const std::string& file_name, const std::string& content) {
    const std::filesystem::path path = out_dir / file_name;
    write_text_file(path, content);
    digests.set(file_name, sha256_hex(content));
    artifacts.files.push_back(path);
  };

  if (formats.count(OutputFormat::Csv) != 0) {
    for (const auto& table : data.tables) emit(table.name + ".csv", table.render());
  }
  if (formats.count(OutputFormat::Json) != 0) {
    for (const auto& [name, doc] : data.documents) emit(name + ".json", doc.dump());
  }
  if (formats.count(OutputFormat::Svg) != 0) {
    for (const auto& plot : data.plots) emit(plot.name + ".svg", plot.render());
  }

  JsonValue versions = JsonValue::object();
  versions.set("archam", kVersion);
  versions.set("manifest_schema", kManifestSchema);

  JsonValue manifest = JsonValue::object();
  manifest.set("config", config_echo);
  manifest.set("versions", std::move(versions));
  manifest.set("timestamp", timestamp_utc());
  manifest.set("digests", std::move(digests));
  manifest.set("checks", checks);
  artifacts.manifest = manifest;

  if (formats.count(OutputFormat::Json) != 0) {
    const std::filesystem::path path = out_dir / "manifest.json";
    write_text_file(path, manifest.dump());
    artifacts.files.push_back(path);
  }
  return artifacts;
}

RunArtifacts run_case(const RunConfig& cfg) {
  switch (cfg.case_kind) {
    case CaseKind::FlowNormal: {
      const GridPtr grid = build_uniform_grid(cfg.grid_min, cfg.grid_max, cfg.grid_n);
      return run_flow_case(cfg, presets::normal_location_state(grid));
    }
    case CaseKind::FlowCauchy: {
      const GridPtr grid = build_uniform_grid(cfg.grid_min, cfg.grid_max, cfg.grid_n);
      return run_flow_case(cfg, presets::cauchy_location_state(grid));
    }
    case CaseKind::FlowCustom: return run_flow_case(cfg, load_custom_initial_state(cfg));
    case CaseKind::Simplex3: return run_simplex3_case(cfg);
    case CaseKind::Scalar1: return run_scalar1_case(cfg);
    case CaseKind::Pendulum: return run_pendulum_case(cfg);
    case CaseKind::Verify: return run_verify_suite(cfg);
  }
  throw std::logic_error("run_case: unhandled case");
}

}  // namespace archam
