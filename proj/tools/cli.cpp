#include "romscale/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "romscale/calibrate.hpp"
#include "romscale/csv.hpp"
#include "romscale/error.hpp"
#include "romscale/experiment.hpp"
#include "romscale/lengthscale.hpp"
#include "romscale/parallel.hpp"
#include "romscale/pod.hpp"
#include "romscale/rom_integrators.hpp"
#include "romscale/rom_operators.hpp"
#include "romscale/snapshot_io.hpp"
#include "romscale/stats.hpp"
#include "romscale/testbed.hpp"

namespace romscale {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

class Manifest {
 public:
  explicit Manifest(std::string subcommand) : subcommand_(std::move(subcommand)) {}

  json config = json::object();
  json inputs = json::object();
  json outputs = json::object();
  json results = json::object();
  std::optional<std::uint64_t> seed;

  void write(const fs::path& dir) const {
    json m;
    m["subcommand"] = subcommand_;
    m["config"] = config;
    m["inputs"] = inputs;
    m["outputs"] = outputs;
    if (!results.empty()) m["results"] = results;
    m["seed"] = seed ? json(*seed) : json(nullptr);
    m["version"] = ROMSCALE_VERSION;
    m["duration_seconds"] = std::chrono::duration<double>(Clock::now() - start_).count();
    std::ofstream f(dir / "manifest.json");
    f << m.dump(2) << '\n';
    if (!f) throw Error("cannot write '" + (dir / "manifest.json").string() + "'");
  }

 private:
  std::string subcommand_;
  Clock::time_point start_ = Clock::now();
};

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream f(file, std::ios::binary);
  f << text;
  if (!f) throw Error("cannot write '" + file.string() + "'");
}

std::string read_text(const fs::path& file) {
  std::ifstream f(file, std::ios::binary);
  if (!f) throw ValidationError("cannot read '" + file.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create '" + dir.string() + "': " + ec.message());
}

std::string na(const std::optional<double>& v) { return v ? format_double(*v) : "n/a"; }

json to_json(const BurgersConfig& c) {
  return {{"nx", c.nx},
          {"length", c.length},
          {"nu", c.nu},
          {"forcing_amplitude", c.forcing_amplitude},
          {"dt", c.dt},
          {"t_collect_start", c.t_collect_start},
          {"t_collect_end", c.t_collect_end},
          {"n_snapshots", c.n_snapshots},
          {"seed", c.seed},
          {"steady_forcing", c.steady_forcing},
          {"forcing_modes", c.forcing_modes},
          {"forcing_slope", c.forcing_slope},
          {"forcing_frequency", c.forcing_frequency},
          {"initial", c.initial},
          {"initial_amplitude", c.initial_amplitude}};
}

json to_json(const SyntheticChannelConfig& c) {
  return {{"dims", c.dims},
          {"lengths", c.lengths},
          {"n_modes", c.n_modes},
          {"spectrum_slope", c.spectrum_slope},
          {"mean_profile_amplitude", c.mean_profile_amplitude},
          {"n_snapshots", c.n_snapshots},
          {"seed", c.seed},
          {"dt", c.dt}};
}

KeyValueConfig load_config(const std::string& file, std::optional<std::uint64_t> seed) {
  std::string text = file.empty() ? std::string() : read_text(file);
  if (seed) text += "\nseed = " + std::to_string(*seed) + "\n";
  return KeyValueConfig::parse(text);
}

std::optional<double> testbed_nu(const fs::path& snapshots) {
  const fs::path file = snapshots / "testbed.json";
  if (!fs::exists(file)) return std::nullopt;
  const json j = json::parse(read_text(file));
  if (!j.contains("nu")) return std::nullopt;
  return j["nu"].get<double>();
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double snapshot_spacing(const SnapshotSet& set) {
  if (set.size() < 2) throw ValidationError("ROM runs need at least two snapshots");
  return set.times()[1] - set.times()[0];
}

// a0, a1 from the first two snapshots when dt matches their spacing;
// otherwise a1 comes from one forward Euler step.
std::pair<Eigen::VectorXd, Eigen::VectorXd> initial_pair(const ROMOperators& ops,
                                                         const PODBasis& basis,
                                                         const SnapshotSet& set, double dt) {
  Eigen::VectorXd a0 = to_eigen(project(basis, set[0], ops.r));
  const double spacing = snapshot_spacing(set);
  if (std::abs(dt - spacing) <= 1e-12 * spacing) {
    return {a0, to_eigen(project(basis, set[1], ops.r))};
  }
  Eigen::VectorXd a1 = a0 + dt * rhs(ops, a0, set.times()[0]);
  return {a0, a1};
}

ROMOperators operators_for(const fs::path& dir, std::size_t r) {
  ROMOperators ops = read_operators(dir);
  if (r == 0) return ops;
  if (r > ops.r) {
    throw ValidationError("r = " + std::to_string(r) + " exceeds the " + std::to_string(ops.r) +
                          " modes of the operators in '" + dir.string() + "'");
  }
  return r < ops.r ? truncate(ops, r) : ops;
}

double lengthscale_for(DeltaKind kind, const PODBasis& basis, const SnapshotSet& set,
                       std::size_t r) {
  if (kind == DeltaKind::delta1) return delta1(basis, set, r);
  return delta2(energy_ratio(basis, r), set.grid().meshsize(), characteristic_length(set.grid()));
}

std::string trajectory_csv(const ROMTrajectory& t) {
  const std::size_t r = t.coefficients.empty() ? 0 : static_cast<std::size_t>(t.coefficients[0].size());
  std::vector<std::string> header{"t", "KE"};
  for (std::size_t j = 1; j <= r; ++j) header.push_back("a_" + std::to_string(j));
  std::string out = csv_record(header);
  for (std::size_t k = 0; k < t.times.size(); ++k) {
    std::vector<std::string> rec{format_double(t.times[k]), format_double(t.ke[k])};
    for (std::size_t j = 0; j < r; ++j) rec.push_back(format_double(t.coefficients[k][j]));
    out += csv_record(rec);
  }
  return out;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string kind, config, out;
  std::optional<std::uint64_t> seed;
};

void cmd_generate(const GenerateArgs& a, std::ostream& out) {
  Manifest man("generate");
  const KeyValueConfig kv = load_config(a.config, a.seed);
  const fs::path dir = a.out;
  json testbed;
  if (a.kind == "burgers") {
    const BurgersConfig cfg = BurgersConfig::from_config(kv);
    prepare_dir(dir);
    const BurgersRun run = run_burgers(cfg);
    write_snapshots(run.snapshots, dir);
    write_forcing(run.forcing, dir);
    testbed = {{"kind", "burgers"}, {"nu", cfg.nu}};
    man.config = to_json(cfg);
    man.seed = cfg.seed;
    man.results["snapshots"] = run.snapshots.size();
    out << "wrote " << run.snapshots.size() << " Burgers snapshots to " << dir.string() << '\n';
  } else {
    const SyntheticChannelConfig cfg = SyntheticChannelConfig::from_config(kv);
    prepare_dir(dir);
    const SnapshotSet set = generate_synthetic_channel(cfg);
    write_snapshots(set, dir);
    testbed = {{"kind", "channel"}};
    man.config = to_json(cfg);
    man.seed = cfg.seed;
    man.results["snapshots"] = set.size();
    out << "wrote " << set.size() << " channel snapshots to " << dir.string() << '\n';
  }
  write_text(dir / "testbed.json", testbed.dump(2) + "\n");
  man.config["kind"] = a.kind;
  if (!a.config.empty()) man.inputs["config"] = a.config;
  man.outputs["snapshots"] = dir.string();
  man.write(dir);
}

// ---------------------------------------------------------------- pod

struct PodArgs {
  std::string in, out;
  std::size_t rmax = 0;
  double tol = 1e-12;
};

void cmd_pod(const PodArgs& a, std::ostream& out) {
  Manifest man("pod");
  const SnapshotSet set = read_snapshots(a.in);
  const PODBasis basis = compute_pod(set, a.rmax, a.tol);
  prepare_dir(a.out);
  write_basis(basis, a.out);
  man.config = {{"rmax", a.rmax}, {"tol", a.tol}};
  man.inputs["snapshots"] = a.in;
  man.outputs["basis"] = a.out;
  man.results["modes"] = basis.size();
  man.results["lambda_1"] = basis.eigenvalues().front();
  man.write(a.out);
  out << "kept " << basis.size() << " POD modes\n";
}

// ---------------------------------------------------------------- assemble

struct AssembleArgs {
  std::string basis, snapshots, out;
  std::size_t r = 0;
  std::optional<double> nu;
};

void cmd_assemble(const AssembleArgs& a, std::ostream& out) {
  Manifest man("assemble");
  const PODBasis basis = read_basis(a.basis);
  if (!fs::exists(fs::path(a.snapshots) / "meta.json")) {
    throw ValidationError("no snapshot container at '" + a.snapshots + "' (missing meta.json)");
  }
  std::optional<double> nu = a.nu ? a.nu : testbed_nu(a.snapshots);
  if (!nu) throw ValidationError("viscosity unknown: pass --nu or use a generated snapshot dir");
  const std::size_t r = a.r ? a.r : std::min<std::size_t>(50, basis.size());
  const auto forcing = read_forcing(a.snapshots, basis.grid());
  const ROMOperators ops =
      forcing ? assemble(basis, r, *nu, *forcing)
              : assemble(basis, r, *nu, VelocityField(basis.grid(), basis.components()));
  prepare_dir(a.out);
  write_operators(ops, a.out);
  man.config = {{"r", r}, {"nu", *nu}, {"separable_forcing", forcing.has_value()}};
  man.inputs = {{"basis", a.basis}, {"snapshots", a.snapshots}};
  man.outputs["operators"] = a.out;
  man.write(a.out);
  out << "assembled operators for r = " << r << '\n';
}

// ---------------------------------------------------------------- lengthscale

struct LengthscaleArgs {
  std::string basis, snapshots, out;
  std::vector<std::size_t> r;
  std::optional<double> L, h;
};

void cmd_lengthscale(const LengthscaleArgs& a, std::ostream& out) {
  Manifest man("lengthscale");
  const PODBasis basis = read_basis(a.basis);
  std::optional<SnapshotSet> set;
  if (!a.snapshots.empty()) set = read_snapshots(a.snapshots);
  const double h = a.h ? *a.h : basis.grid().meshsize();
  const double L = a.L ? *a.L : characteristic_length(basis.grid());
  const auto reports = lengthscale_table(basis, set ? &*set : nullptr, a.r, h, L);
  std::string csv = csv_record({"r", "lambda_ratio", "delta1", "delta2"});
  for (const auto& rep : reports) {
    csv += csv_record({std::to_string(rep.r), format_double(rep.lambda_ratio),
                       format_optional(rep.delta1), format_double(rep.delta2)});
  }
  if (a.out.empty()) {
    out << csv;
    return;
  }
  prepare_dir(a.out);
  write_text(fs::path(a.out) / "lengthscale.csv", csv);
  man.config = {{"r", a.r}, {"h", h}, {"L", L}};
  man.inputs["basis"] = a.basis;
  if (set) man.inputs["snapshots"] = a.snapshots;
  man.outputs["table"] = (fs::path(a.out) / "lengthscale.csv").string();
  man.write(a.out);
}

// ---------------------------------------------------------------- run

struct RunArgs {
  std::string variant, ops, basis, snapshots, out;
  std::size_t r = 0;
  std::optional<double> dt;
  std::size_t steps = 0;
  std::optional<double> alpha, gamma, delta, u_ml;
  bool use_delta1 = false, use_delta2 = false;
  double chi = 6e-3;
  double ke_factor = 10.0;
};

void cmd_run(const RunArgs& a, std::ostream& out) {
  Manifest man("run");
  const PODBasis basis = read_basis(a.basis);
  const SnapshotSet set = read_snapshots(a.snapshots);
  const ROMOperators ops = operators_for(a.ops, a.r);

  RunConfig cfg;
  cfg.variant = parse_variant(a.variant);
  cfg.dt = a.dt ? *a.dt : snapshot_spacing(set);
  cfg.t0 = set.times()[0];
  cfg.n_steps = a.steps;
  cfg.max_snapshot_ke = max_kinetic_energy(set);
  cfg.ke_blowup_factor = a.ke_factor;

  std::optional<double> delta = a.delta;
  DeltaKind kind = DeltaKind::explicit_value;
  if (a.use_delta1 || a.use_delta2) {
    kind = a.use_delta1 ? DeltaKind::delta1 : DeltaKind::delta2;
    delta = lengthscale_for(kind, basis, set, ops.r);
  }
  if (cfg.variant != Variant::G && !delta) {
    throw ValidationError("the " + std::string(variant_name(cfg.variant)) +
                          " variant needs --delta1, --delta2 or --delta");
  }
  if (cfg.variant == Variant::ML) {
    if (!a.alpha) throw ValidationError("the ml variant needs --alpha");
    cfg.ml = {*a.alpha, a.u_ml ? *a.u_ml : default_ml_velocity(basis.mean_field()), *delta, kind};
    cfg.ml.validate();
  } else if (cfg.variant == Variant::EFR) {
    if (!a.gamma) throw ValidationError("the efr variant needs --gamma");
    cfg.efr = {*a.gamma, *delta, a.chi, kind};
    cfg.efr.validate();
  }

  const auto [a0, a1] = initial_pair(ops, basis, set, cfg.dt);
  const ROMTrajectory traj = run(ops, cfg, a0, a1);
  const std::string csv = trajectory_csv(traj);

  if (traj.blew_up) {
    out << "blow-up at t = " << format_double(*traj.blowup_time) << ": " << traj.failure << '\n';
  }
  if (a.out.empty()) {
    out << csv;
    return;
  }
  prepare_dir(a.out);
  write_text(fs::path(a.out) / "trajectory.csv", csv);
  man.config = {{"variant", variant_name(cfg.variant)}, {"r", ops.r},
                {"dt", cfg.dt},   {"steps", cfg.n_steps},
                {"t0", cfg.t0},   {"ke_blowup_factor", cfg.ke_blowup_factor}};
  if (cfg.variant == Variant::ML) {
    man.config["alpha"] = cfg.ml.alpha;
    man.config["U_ML"] = cfg.ml.U_ML;
  }
  if (cfg.variant == Variant::EFR) {
    man.config["gamma"] = cfg.efr.gamma;
    man.config["chi"] = cfg.efr.chi;
  }
  if (delta) man.config["delta"] = *delta;
  man.inputs = {{"operators", a.ops}, {"basis", a.basis}, {"snapshots", a.snapshots}};
  man.outputs["trajectory"] = (fs::path(a.out) / "trajectory.csv").string();
  man.results["blew_up"] = traj.blew_up;
  man.results["blowup_time"] = traj.blowup_time ? json(*traj.blowup_time) : json(nullptr);
  man.results["failure"] = traj.failure;
  man.results["mean_ke"] = traj.mean_ke();
  man.write(a.out);
}

// ---------------------------------------------------------------- stats

struct StatsArgs {
  std::string snapshots, trajectory, basis, out;
  double nu = 0.0;
};

void cmd_stats(const StatsArgs& a, std::ostream& out) {
  Manifest man("stats");
  const SnapshotSet set = read_snapshots(a.snapshots);
  std::vector<double> times, ke;
  ReynoldsAccumulator acc(set.grid(), set.components());

  if (!a.trajectory.empty()) {
    if (a.basis.empty()) throw ValidationError("--trajectory needs --basis");
    const PODBasis basis = read_basis(a.basis);
    const auto records = parse_csv(read_text(a.trajectory));
    if (records.empty() || records[0].size() < 2 || records[0][0] != "t" || records[0][1] != "KE") {
      throw ValidationError("'" + a.trajectory + "' is not a trajectory CSV (t, KE, a_1..a_r)");
    }
    const std::size_t width = records[0].size();
    for (std::size_t k = 1; k < records.size(); ++k) {
      const auto& rec = records[k];
      if (rec.size() != width) throw ValidationError("ragged trajectory CSV at record " + std::to_string(k));
      times.push_back(parse_double(rec[0]));
      ke.push_back(parse_double(rec[1]));
      std::vector<double> coeffs;
      for (std::size_t j = 2; j < width; ++j) coeffs.push_back(parse_double(rec[j]));
      acc.add(reconstruct(basis, coeffs));
    }
  } else {
    for (std::size_t k = 0; k < set.size(); ++k) {
      times.push_back(set.times()[k]);
      ke.push_back(kinetic_energy(set[k]));
      acc.add(set[k]);
    }
  }

  const StatsReport rep = make_report(ke, acc.finish(), a.nu);
  const ReynoldsStress& rs = rep.reynolds;
  double mean_ke = 0.0;
  for (double e : ke) mean_ke += e;
  mean_ke /= static_cast<double>(std::max<std::size_t>(ke.size(), 1));

  std::string report = csv_record({"quantity", "value"});
  report += csv_record({"mean_ke", format_double(mean_ke)});
  report += csv_record({"u_tau", na(rep.u_tau)});
  report += csv_record({"U_rms", na(rep.U_rms)});
  report += csv_record({"R12", na(rep.R12)});
  for (Eigen::Index i = 0; i < rs.tensor.rows(); ++i) {
    for (Eigen::Index j = 0; j < rs.tensor.cols(); ++j) {
      report += csv_record({"R_" + std::to_string(i + 1) + std::to_string(j + 1),
                            format_double(rs.tensor(i, j))});
    }
  }

  std::string profile = csv_record({"y", "U_mean", "U_RMS", "R12"});
  for (std::size_t row = 0; row < rs.y.size(); ++row) {
    std::optional<double> urms, r12v;
    if (rep.u_tau && *rep.u_tau > 0.0) {
      const Eigen::MatrixXd& R = rs.profile[row];
      if (R.rows() == 3) urms = u_rms(R, *rep.u_tau);
      if (R.rows() >= 2) r12v = r12(R, *rep.u_tau);
    }
    profile += csv_record({format_double(rs.y[row]), format_double(rs.U_mean_profile[row]), na(urms),
                           na(r12v)});
  }

  std::string ke_csv = csv_record({"t", "KE"});
  for (std::size_t k = 0; k < ke.size(); ++k) {
    ke_csv += csv_record({format_double(times[k]), format_double(ke[k])});
  }

  if (a.out.empty()) {
    out << report;
    return;
  }
  const fs::path dir = a.out;
  prepare_dir(dir);
  write_text(dir / "report.csv", report);
  write_text(dir / "profile.csv", profile);
  write_text(dir / "ke.csv", ke_csv);
  man.config["nu"] = a.nu;
  man.inputs["snapshots"] = a.snapshots;
  if (!a.trajectory.empty()) {
    man.inputs["trajectory"] = a.trajectory;
    man.inputs["basis"] = a.basis;
  }
  man.outputs = {{"report", (dir / "report.csv").string()},
                 {"profile", (dir / "profile.csv").string()},
                 {"ke", (dir / "ke.csv").string()}};
  man.write(dir);
}

// ---------------------------------------------------------------- calibrate

struct CalibrateArgs {
  std::string variant, ops, basis, snapshots, out;
  int which_delta = 1;
  std::vector<std::size_t> r;
  double lo = 0.0, hi = 1.0, tol = 1e-3;
  std::optional<double> dt, u_ml;
  std::size_t steps = 2000;
  double chi = 6e-3;
  double ke_factor = 10.0;
  bool optimal = false;
};

void cmd_calibrate(const CalibrateArgs& a, std::ostream& out) {
  Manifest man("calibrate");
  const PODBasis basis = read_basis(a.basis);
  const SnapshotSet set = read_snapshots(a.snapshots);
  const ROMOperators full = read_operators(a.ops);

  SweepSpec spec;
  spec.r_values = a.r;
  spec.param_lo = a.lo;
  spec.param_hi = a.hi;
  spec.tol_param = a.tol;
  spec.variant = parse_variant(a.variant);
  spec.chi = a.chi;
  spec.U_ML = a.u_ml ? *a.u_ml : default_ml_velocity(basis.mean_field());
  spec.which_delta = a.which_delta == 1 ? DeltaKind::delta1 : DeltaKind::delta2;
  spec.validate();

  CalibrationSetup setup;
  setup.t0 = set.times()[0];
  setup.dt = a.dt ? *a.dt : snapshot_spacing(set);
  setup.n_steps = a.steps;
  setup.max_snapshot_ke = max_kinetic_energy(set);
  setup.ke_blowup_factor = a.ke_factor;

  const double h = set.grid().meshsize();
  const double L = characteristic_length(set.grid());
  const auto coeffs = full_coefficients(basis, set);
  std::vector<CalibrationCase> cases;
  std::vector<TableRow> rows;
  for (std::size_t r : a.r) {
    if (r > full.r) {
      throw ValidationError("r = " + std::to_string(r) + " exceeds the " + std::to_string(full.r) +
                            " modes of the operators");
    }
    CalibrationCase c;
    c.r = r;
    c.ops = r < full.r ? truncate(full, r) : full;
    std::tie(c.a0, c.a1) = initial_pair(c.ops, basis, set, setup.dt);
    TableRow row;
    row.r = r;
    if (r < basis.size()) row.at("delta1") = delta1(basis, coeffs, r);
    row.at("delta2") = delta2(energy_ratio(basis, r), h, L);
    const auto& d = row.at(a.which_delta == 1 ? "delta1" : "delta2");
    if (!d) throw ValidationError("delta1 is undefined at r = R = " + std::to_string(r));
    c.delta = *d;
    cases.push_back(std::move(c));
    rows.push_back(row);
  }

  const std::string suffix = a.which_delta == 1 ? "_delta1" : "_delta2";
  const std::string param = spec.variant == Variant::ML ? "alpha" : "gamma";
  const auto thresholds = find_threshold(spec, cases, setup);
  std::string detail = csv_record({"r", "threshold", "evaluations", "verified"});
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    rows[k].at(param + "0" + suffix) = thresholds[k].value;
    detail += csv_record({std::to_string(thresholds[k].r), format_double(thresholds[k].value),
                          std::to_string(thresholds[k].evaluations),
                          thresholds[k].verified ? "true" : "false"});
  }
  double reference_ke = 0.0;
  if (a.optimal) {
    for (const auto& s : set.snapshots()) reference_ke += kinetic_energy(s);
    reference_ke /= static_cast<double>(set.size());
    const auto optima = find_optimal(spec, reference_ke, cases, setup);
    for (std::size_t k = 0; k < optima.size(); ++k) rows[k].at(param + "_opt" + suffix) = optima[k].value;
  }

  const std::string table = table_report(rows);
  if (a.out.empty()) {
    out << table;
    return;
  }
  const fs::path dir = a.out;
  prepare_dir(dir);
  write_text(dir / "table.csv", table);
  write_text(dir / "thresholds.csv", detail);
  man.config = {{"variant", variant_name(spec.variant)},
                {"which_delta", a.which_delta},
                {"r", a.r},
                {"lo", a.lo},
                {"hi", a.hi},
                {"tol", a.tol},
                {"dt", setup.dt},
                {"steps", setup.n_steps},
                {"ke_blowup_factor", setup.ke_blowup_factor},
                {"optimal", a.optimal}};
  if (spec.variant == Variant::ML) man.config["U_ML"] = spec.U_ML;
  if (spec.variant == Variant::EFR) man.config["chi"] = spec.chi;
  if (a.optimal) man.config["reference_ke"] = reference_ke;
  man.inputs = {{"operators", a.ops}, {"basis", a.basis}, {"snapshots", a.snapshots}};
  man.outputs = {{"table", (dir / "table.csv").string()},
                 {"thresholds", (dir / "thresholds.csv").string()}};
  man.write(dir);
}

// ---------------------------------------------------------------- repro

struct ReproArgs {
  std::uint64_t seed = 1;
  std::string out, config;
  std::vector<std::size_t> r{4, 8, 16, 32, 40, 50};
  std::size_t steps = 2000;
};

struct SearchJob {
  Variant variant;
  DeltaKind kind;
  std::size_t r_index;
  std::optional<double> threshold;
  std::size_t evaluations = 0;
  bool verified = false;
  std::string note;
  std::optional<double> optimum;
};

void cmd_repro(const ReproArgs& a, std::ostream& out) {
  Manifest man("repro");
  BurgersConfig cfg = BurgersConfig::from_config(load_config(a.config, a.seed));
  std::vector<std::size_t> rs = a.r;
  if (rs.empty()) throw ValidationError("repro needs at least one r");
  const std::size_t r_max = *std::max_element(rs.begin(), rs.end());
  const BurgersExperiment ex(cfg, r_max);
  if (r_max >= ex.basis().size()) {
    throw ValidationError("r = " + std::to_string(r_max) + " needs more than " +
                          std::to_string(ex.basis().size()) + " POD modes");
  }
  const fs::path dir = a.out;
  prepare_dir(dir);

  // lengthscales and the inversion round trip
  std::string table1 = csv_record({"r", "lambda_ratio", "delta1", "delta2"});
  std::string roundtrip =
      csv_record({"r", "delta2", "lambda_ratio", "lambda_recovered", "delta2_recovered"});
  std::vector<TableRow> rows;
  for (std::size_t r : rs) {
    const double lam = energy_ratio(ex.basis(), r);
    const double d1 = ex.delta1(r), d2 = ex.delta2(r);
    table1 += csv_record({std::to_string(r), format_double(lam), format_double(d1), format_double(d2)});
    const double lam_back = invert_delta2(d2, ex.h(), ex.L());
    roundtrip += csv_record({std::to_string(r), format_double(d2), format_double(lam),
                             format_double(lam_back), format_double(delta2(lam_back, ex.h(), ex.L()))});
    TableRow row;
    row.r = r;
    row.at("delta1") = d1;
    row.at("delta2") = d2;
    rows.push_back(row);
  }

  const CalibrationSetup setup = ex.setup(a.steps);
  const double reference_ke = ex.mean_snapshot_ke();
  const double ml_hi = 100.0, ml_tol = 1e-4, efr_hi = 10.0, efr_tol = 1e-7, chi = 1.0;

  std::vector<CalibrationCase> cases1, cases2;
  for (std::size_t r : rs) {
    cases1.push_back(ex.make_case(r, DeltaKind::delta1));
    cases2.push_back(ex.make_case(r, DeltaKind::delta2));
  }
  auto spec_for = [&](Variant v, DeltaKind kind, double hi, double tol) {
    SweepSpec s;
    s.r_values = rs;
    s.variant = v;
    s.which_delta = kind;
    s.param_lo = 0.0;
    s.param_hi = hi;
    s.tol_param = tol;
    s.chi = chi;
    s.U_ML = ex.U_ML();
    return s;
  };

  std::vector<SearchJob> jobs;
  for (Variant v : {Variant::ML, Variant::EFR}) {
    for (DeltaKind kind : {DeltaKind::delta1, DeltaKind::delta2}) {
      for (std::size_t i = 0; i < rs.size(); ++i) jobs.push_back({v, kind, i, {}, 0, false, {}, {}});
    }
  }
  parallel_for(jobs.size(), [&](std::size_t k) {
    SearchJob& job = jobs[k];
    const bool ml = job.variant == Variant::ML;
    const SweepSpec spec = spec_for(job.variant, job.kind, ml ? ml_hi : efr_hi, ml ? ml_tol : efr_tol);
    const CalibrationCase& c = (job.kind == DeltaKind::delta1 ? cases1 : cases2)[job.r_index];
    auto stable = [&](double p) { return is_stable(spec, c, setup, p); };
    try {
      const SearchResult s = bisect_threshold(stable, spec.param_lo, spec.param_hi, spec.tol_param);
      job.threshold = s.value;
      job.evaluations = s.evaluations;
      job.verified = stable(s.value + spec.tol_param) &&
                     !stable(std::max(spec.param_lo, s.value - spec.tol_param));
    } catch (const BracketError& e) {
      job.note = e.what();
      return;
    }
    // optimum in a bracket scaled to the threshold
    const SweepSpec opt = spec_for(job.variant, job.kind, 4.0 * *job.threshold,
                                   std::max(4e-3 * *job.threshold, 1e-12));
    auto objective = [&](double p) {
      const ROMTrajectory t = run(c.ops, make_run_config(opt, c, setup, p), c.a0, c.a1);
      return t.blew_up ? std::numeric_limits<double>::infinity() : std::abs(t.mean_ke() - reference_ke);
    };
    try {
      job.optimum = golden_section(objective, opt.param_lo, opt.param_hi, opt.tol_param).value;
    } catch (const BracketError& e) {
      job.note = e.what();
    }
  });

  std::string thresholds =
      csv_record({"variant", "delta", "r", "threshold", "evaluations", "verified", "optimum", "note"});
  for (const SearchJob& job : jobs) {
    const bool ml = job.variant == Variant::ML;
    const std::string suffix = job.kind == DeltaKind::delta1 ? "_delta1" : "_delta2";
    TableRow& row = rows[job.r_index];
    row.at((ml ? "alpha0" : "gamma0") + suffix) = job.threshold;
    row.at((ml ? "alpha_opt" : "gamma_opt") + suffix) = job.optimum;
    thresholds += csv_record({variant_name(job.variant), suffix.substr(1), std::to_string(rs[job.r_index]),
                              format_optional(job.threshold), std::to_string(job.evaluations),
                              job.threshold ? (job.verified ? "true" : "false") : "",
                              format_optional(job.optimum), job.note});
  }

  // KE curves: FOM snapshots, G-ROM, and the closures at their optima
  std::string curves = csv_record({"model", "r", "t", "KE"});
  for (std::size_t k = 0; k < ex.snapshots().size(); ++k) {
    curves += csv_record({"fom", "", format_double(ex.snapshots().times()[k]),
                          format_double(kinetic_energy(ex.snapshots()[k]))});
  }
  struct Curve {
    std::string model;
    std::size_t r;
    ROMTrajectory traj;
  };
  std::vector<std::pair<std::string, std::size_t>> curve_specs;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    curve_specs.emplace_back("g", i);
    for (const SearchJob& job : jobs) {
      if (job.r_index != i || !job.optimum) continue;
      curve_specs.emplace_back(std::string(job.variant == Variant::ML ? "ml" : "efr") +
                                   (job.kind == DeltaKind::delta1 ? "_delta1" : "_delta2"),
                               i);
    }
  }
  std::vector<Curve> curve_runs(curve_specs.size());
  parallel_for(curve_specs.size(), [&](std::size_t k) {
    const auto& [model, i] = curve_specs[k];
    const std::size_t r = rs[i];
    curve_runs[k].model = model;
    curve_runs[k].r = r;
    if (model == "g") {
      SweepSpec g = spec_for(Variant::ML, DeltaKind::delta1, 1.0, 1.0);
      RunConfig rc = make_run_config(g, cases1[i], setup, 0.0);
      rc.variant = Variant::G;
      curve_runs[k].traj = run(cases1[i].ops, rc, cases1[i].a0, cases1[i].a1);
      return;
    }
    for (const SearchJob& job : jobs) {
      const std::string name = std::string(job.variant == Variant::ML ? "ml" : "efr") +
                               (job.kind == DeltaKind::delta1 ? "_delta1" : "_delta2");
      if (job.r_index != i || name != model) continue;
      const CalibrationCase& c = (job.kind == DeltaKind::delta1 ? cases1 : cases2)[i];
      const SweepSpec s = spec_for(job.variant, job.kind, 1.0, 1.0);
      curve_runs[k].traj = run(c.ops, make_run_config(s, c, setup, *job.optimum), c.a0, c.a1);
    }
  });
  for (const Curve& c : curve_runs) {
    for (std::size_t k = 0; k < c.traj.times.size(); ++k) {
      curves += csv_record({c.model, std::to_string(c.r), format_double(c.traj.times[k]),
                            format_double(c.traj.ke[k])});
    }
  }

  write_text(dir / "table1.csv", table1);
  write_text(dir / "table1_roundtrip.csv", roundtrip);
  write_text(dir / "thresholds.csv", thresholds);
  write_text(dir / "tables.csv", table_report(rows));
  write_text(dir / "ke_curves.csv", curves);

  man.seed = cfg.seed;
  man.config = {{"burgers", to_json(cfg)},
                {"r", rs},
                {"steps", a.steps},
                {"dt", setup.dt},
                {"ke_blowup_factor", setup.ke_blowup_factor},
                {"U_ML", ex.U_ML()},
                {"chi", chi},
                {"ml_range", {0.0, ml_hi}},
                {"ml_tol", ml_tol},
                {"efr_range", {0.0, efr_hi}},
                {"efr_tol", efr_tol},
                {"reference_ke", reference_ke},
                {"h", ex.h()},
                {"L", ex.L()}};
  if (!a.config.empty()) man.inputs["config"] = a.config;
  for (const char* name : {"table1", "table1_roundtrip", "thresholds", "tables", "ke_curves"}) {
    man.outputs[name] = (dir / (std::string(name) + ".csv")).string();
  }
  man.write(dir);
  out << "wrote reproduction tables to " << dir.string() << '\n';
}

}  // namespace

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Closure lengthscales for reduced order models of turbulent flows", "romscale"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  app.set_version_flag("--version", ROMSCALE_VERSION);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate a snapshot set from a testbed");
  g->add_option("kind", gen.kind, "burgers or channel")->required()->check(CLI::IsMember({"burgers", "channel"}));
  g->add_option("--config", gen.config, "key = value config file")->check(CLI::ExistingFile);
  g->add_option("--out", gen.out, "Output snapshot directory")->required();
  g->add_option("--seed", gen.seed, "Override the config seed");

  PodArgs pod;
  auto* p = app.add_subcommand("pod", "Compute a POD basis");
  p->add_option("--in", pod.in, "Snapshot directory")->required();
  p->add_option("--out", pod.out, "Basis directory")->required();
  p->add_option("--rmax", pod.rmax, "Largest number of modes (0: no cap)");
  p->add_option("--tol", pod.tol, "Relative eigenvalue cutoff");

  AssembleArgs asmb;
  auto* as = app.add_subcommand("assemble", "Assemble Galerkin ROM operators");
  as->add_option("--basis", asmb.basis, "Basis directory")->required();
  as->add_option("--snapshots", asmb.snapshots, "Snapshot directory (forcing, viscosity)")->required();
  as->add_option("--r", asmb.r, "Number of modes (default min(50, R))");
  as->add_option("--nu", asmb.nu, "Viscosity (default: from the snapshot directory)");
  as->add_option("--out", asmb.out, "Operator directory")->required();

  LengthscaleArgs ls;
  auto* l = app.add_subcommand("lengthscale", "Tabulate delta1 and delta2");
  l->add_option("--basis", ls.basis, "Basis directory")->required();
  l->add_option("--snapshots", ls.snapshots, "Snapshot directory (enables delta1)");
  l->add_option("--r", ls.r, "Comma-separated list of r")->required()->delimiter(',');
  l->add_option("--L", ls.L, "Largest lengthscale (default: characteristic domain length)");
  l->add_option("--hmin", ls.h, "Smallest lengthscale (default: mesh size)");
  l->add_option("--out", ls.out, "Output directory (default: CSV on stdout)");

  RunArgs ra;
  auto* rn = app.add_subcommand("run", "Integrate a ROM");
  rn->add_option("--variant", ra.variant, "g, ml or efr")->required()->check(CLI::IsMember({"g", "ml", "efr"}));
  rn->add_option("--ops", ra.ops, "Operator directory")->required();
  rn->add_option("--basis", ra.basis, "Basis directory")->required();
  rn->add_option("--snapshots", ra.snapshots, "Snapshot directory")->required();
  rn->add_option("--r", ra.r, "Number of modes (default: all operator modes)");
  rn->add_option("--dt", ra.dt, "Time step (default: snapshot spacing)");
  rn->add_option("--steps", ra.steps, "Number of steps")->required();
  rn->add_option("--alpha", ra.alpha, "ML eddy viscosity coefficient");
  auto* d1 = rn->add_flag("--delta1", ra.use_delta1, "Use the field-space lengthscale");
  auto* d2 = rn->add_flag("--delta2", ra.use_delta2, "Use the energy-spectrum lengthscale");
  auto* dx = rn->add_option("--delta", ra.delta, "Explicit lengthscale");
  d1->excludes(d2)->excludes(dx);
  d2->excludes(dx);
  rn->add_option("--u-ml", ra.u_ml, "ML velocity scale (default: mean |U_1|)");
  rn->add_option("--gamma", ra.gamma, "EFR filter coefficient");
  rn->add_option("--chi", ra.chi, "EFR relaxation");
  rn->add_option("--ke-factor", ra.ke_factor, "Blow-up bound as a multiple of max snapshot KE");
  rn->add_option("--out", ra.out, "Output directory (default: CSV on stdout)");

  StatsArgs st;
  auto* s = app.add_subcommand("stats", "Kinetic energy and Reynolds stress statistics");
  s->add_option("--snapshots", st.snapshots, "Snapshot directory")->required();
  s->add_option("--trajectory", st.trajectory, "ROM trajectory CSV");
  s->add_option("--basis", st.basis, "Basis directory for the trajectory");
  s->add_option("--nu", st.nu, "Viscosity")->required();
  s->add_option("--out", st.out, "Output directory (default: report CSV on stdout)");

  CalibrateArgs ca;
  auto* c = app.add_subcommand("calibrate", "Stability thresholds and optimal closure parameters");
  c->add_option("--variant", ca.variant, "ml or efr")->required()->check(CLI::IsMember({"ml", "efr"}));
  c->add_option("--which-delta", ca.which_delta, "1 or 2")->required()->check(CLI::IsMember({1, 2}));
  c->add_option("--r", ca.r, "Comma-separated list of r")->required()->delimiter(',');
  c->add_option("--lo", ca.lo, "Lower parameter bound")->required();
  c->add_option("--hi", ca.hi, "Upper parameter bound")->required();
  c->add_option("--tol", ca.tol, "Bracket tolerance")->required();
  c->add_option("--ops", ca.ops, "Operator directory")->required();
  c->add_option("--basis", ca.basis, "Basis directory")->required();
  c->add_option("--snapshots", ca.snapshots, "Snapshot directory")->required();
  c->add_option("--dt", ca.dt, "Time step (default: snapshot spacing)");
  c->add_option("--steps", ca.steps, "Steps per run");
  c->add_option("--chi", ca.chi, "EFR relaxation");
  c->add_option("--u-ml", ca.u_ml, "ML velocity scale (default: mean |U_1|)");
  c->add_option("--ke-factor", ca.ke_factor, "Blow-up bound as a multiple of max snapshot KE");
  c->add_flag("--optimal", ca.optimal, "Also minimize the mean KE mismatch");
  c->add_option("--out", ca.out, "Output directory (default: CSV on stdout)");

  ReproArgs re;
  auto* rp = app.add_subcommand("repro", "End-to-end Burgers reproduction tables and KE curves");
  rp->add_option("--seed", re.seed, "Testbed seed");
  rp->add_option("--out", re.out, "Output directory")->required();
  rp->add_option("--config", re.config, "Burgers config file")->check(CLI::ExistingFile);
  rp->add_option("--r", re.r, "Comma-separated list of r")->delimiter(',');
  rp->add_option("--steps", re.steps, "Steps per ROM run");

  std::vector<const char*> argv{"romscale"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*g) cmd_generate(gen, out);
    else if (*p) cmd_pod(pod, out);
    else if (*as) cmd_assemble(asmb, out);
    else if (*l) cmd_lengthscale(ls, out);
    else if (*rn) cmd_run(ra, out);
    else if (*s) cmd_stats(st, out);
    else if (*c) cmd_calibrate(ca, out);
    else if (*rp) cmd_repro(re, out);
  } catch (const NumericalError& e) {
    err << "romscale: numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "romscale: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace romscale
