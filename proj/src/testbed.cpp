#include "romscale/testbed.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "romscale/error.hpp"
#include "romscale/rng.hpp"

namespace romscale {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t get_count(const KeyValueConfig& kv, const std::string& key, std::size_t fallback) {
  const long long v = kv.get_int(key, static_cast<long long>(fallback));
  if (v < 0) throw ConfigError("config key '" + key + "' must be non-negative");
  return static_cast<std::size_t>(v);
}

std::uint64_t get_seed(const KeyValueConfig& kv, std::uint64_t fallback) {
  const long long v = kv.get_int("seed", static_cast<long long>(fallback));
  if (v < 0) throw ConfigError("config key 'seed' must be non-negative");
  return static_cast<std::uint64_t>(v);
}

template <typename T>
std::array<T, 3> get_triple(const KeyValueConfig& kv, const std::string& key, std::array<T, 3> fallback) {
  if (!kv.has(key)) return fallback;
  std::array<T, 3> out{};
  std::stringstream in(kv.get_string(key, ""));
  std::string item;
  std::size_t n = 0;
  while (std::getline(in, item, ',')) {
    if (n == 3) throw ConfigError("config key '" + key + "' needs exactly 3 values");
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
      out[n++] = static_cast<T>(v);
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "': '" + item + "' is not a number");
    }
  }
  if (n != 3) throw ConfigError("config key '" + key + "' needs exactly 3 values");
  return out;
}

// du/dt for the skew-symmetric form -(1/3)(u u_x + (u^2)_x) + nu u_xx + f,
// which conserves energy exactly under periodic central differences.
void burgers_rhs(std::span<const double> u, std::span<const double> f, double nu, double h,
                 std::span<double> out) {
  const std::size_t n = u.size();
  const double inv2h = 1.0 / (2.0 * h);
  const double invh2 = 1.0 / (h * h);
  for (std::size_t i = 0; i < n; ++i) {
    const double ul = u[(i + n - 1) % n];
    const double ur = u[(i + 1) % n];
    const double ui = u[i];
    const double adv = (ui * (ur - ul) + (ur * ur - ul * ul)) * inv2h / 3.0;
    out[i] = -adv + nu * (ur - 2.0 * ui + ul) * invh2 + f[i];
  }
}

}  // namespace

void BurgersConfig::validate() const {
  if (nx < 8) throw ConfigError("nx must be at least 8");
  if (!(length > 0.0)) throw ConfigError("length must be positive");
  if (!(nu > 0.0)) throw ConfigError("nu must be positive");
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(t_collect_start >= 0.0) || !(t_collect_start < t_collect_end)) {
    throw ConfigError("need 0 <= t_collect_start < t_collect_end");
  }
  if (n_snapshots < 2) throw ConfigError("n_snapshots must be at least 2");
  if (!std::isfinite(forcing_amplitude) || !std::isfinite(steady_forcing) ||
      !std::isfinite(forcing_slope) || !std::isfinite(forcing_frequency)) {
    throw ConfigError("forcing parameters must be finite");
  }
  if (initial != "zero" && initial != "sine") {
    throw ConfigError("initial must be 'zero' or 'sine', got '" + initial + "'");
  }
  const double h = length / static_cast<double>(nx);
  const double limit = h * h / (2.0 * nu);
  if (dt > limit) {
    std::ostringstream msg;
    msg << "dt = " << dt << " violates the diffusion limit h^2/(2 nu) = " << limit
        << " for nx = " << nx << ", nu = " << nu;
    throw ConfigError(msg.str());
  }
}

BurgersConfig BurgersConfig::from_config(const KeyValueConfig& kv) {
  kv.require_known({"nx", "length", "nu", "forcing_amplitude", "dt", "t_collect_start",
                    "t_collect_end", "n_snapshots", "seed", "steady_forcing", "forcing_modes",
                    "forcing_slope", "forcing_frequency", "initial", "initial_amplitude"});
  BurgersConfig c;
  c.nx = get_count(kv, "nx", c.nx);
  c.length = kv.get_double("length", c.length);
  c.nu = kv.get_double("nu", c.nu);
  c.forcing_amplitude = kv.get_double("forcing_amplitude", c.forcing_amplitude);
  c.dt = kv.get_double("dt", c.dt);
  c.t_collect_start = kv.get_double("t_collect_start", c.t_collect_start);
  c.t_collect_end = kv.get_double("t_collect_end", c.t_collect_end);
  c.n_snapshots = get_count(kv, "n_snapshots", c.n_snapshots);
  c.seed = get_seed(kv, c.seed);
  c.steady_forcing = kv.get_double("steady_forcing", c.steady_forcing);
  c.forcing_modes = get_count(kv, "forcing_modes", c.forcing_modes);
  c.forcing_slope = kv.get_double("forcing_slope", c.forcing_slope);
  c.forcing_frequency = kv.get_double("forcing_frequency", c.forcing_frequency);
  c.initial = kv.get_string("initial", c.initial);
  c.initial_amplitude = kv.get_double("initial_amplitude", c.initial_amplitude);
  c.validate();
  return c;
}

Grid burgers_grid(const BurgersConfig& cfg) {
  return Grid({cfg.nx}, {cfg.length / static_cast<double>(cfg.nx)}, {AxisKind::periodic});
}

SeparableForcing burgers_forcing(const BurgersConfig& cfg) {
  const Grid grid = burgers_grid(cfg);
  const std::size_t K = cfg.forcing_modes;
  Xoshiro256 rng(cfg.seed);
  std::vector<double> c(K), phi(K), omega(K);
  for (auto& v : c) v = rng.normal();
  for (auto& v : phi) v = rng.uniform(0.0, kTwoPi);
  for (auto& v : omega) v = kTwoPi * cfg.forcing_frequency * rng.normal();

  const double A = cfg.forcing_amplitude;
  std::vector<VelocityField> patterns;
  std::vector<double> om, ph;
  VelocityField steady(grid, 1);
  auto s = steady.component(0);
  for (std::size_t i = 0; i < cfg.nx; ++i) {
    s[i] = A * cfg.steady_forcing * std::sin(kTwoPi * grid.coordinate(0, i) / cfg.length);
  }
  patterns.push_back(std::move(steady));
  om.push_back(0.0);
  ph.push_back(0.0);

  // sin(theta + w t) = sin(theta) cos(w t) + cos(theta) cos(w t - pi/2)
  for (std::size_t k = 1; k <= K; ++k) {
    const double amp = A * c[k - 1] * std::pow(static_cast<double>(k), cfg.forcing_slope);
    VelocityField p(grid, 1), q(grid, 1);
    auto pv = p.component(0);
    auto qv = q.component(0);
    for (std::size_t i = 0; i < cfg.nx; ++i) {
      const double theta =
          kTwoPi * static_cast<double>(k) * grid.coordinate(0, i) / cfg.length + phi[k - 1];
      pv[i] = amp * std::sin(theta);
      qv[i] = amp * std::cos(theta);
    }
    patterns.push_back(std::move(p));
    om.push_back(omega[k - 1]);
    ph.push_back(0.0);
    patterns.push_back(std::move(q));
    om.push_back(omega[k - 1]);
    ph.push_back(-0.5 * std::numbers::pi);
  }
  return SeparableForcing(std::move(patterns), std::move(om), std::move(ph));
}

BurgersRun run_burgers(const BurgersConfig& cfg) {
  cfg.validate();
  const Grid grid = burgers_grid(cfg);
  const std::size_t n = cfg.nx;
  const double h = grid.spacing()[0];
  SeparableForcing forcing = burgers_forcing(cfg);

  std::vector<double> u(n, 0.0);
  if (cfg.initial == "sine") {
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = cfg.initial_amplitude * std::sin(kTwoPi * grid.coordinate(0, i) / cfg.length);
    }
  }

  const std::size_t M = cfg.n_snapshots;
  std::vector<double> times(M);
  for (std::size_t k = 0; k < M; ++k) {
    times[k] = cfg.t_collect_start +
               (cfg.t_collect_end - cfg.t_collect_start) * static_cast<double>(k) /
                   static_cast<double>(M - 1);
  }
  times.back() = cfg.t_collect_end;

  VelocityField f(grid, 1);
  std::vector<double> k1(n), k2(n), stage(n);
  std::vector<VelocityField> snaps;
  snaps.reserve(M);
  double t = 0.0;

  auto advance = [&](double target) {
    const double span = target - t;
    if (span <= 0.0) return;
    const auto steps = static_cast<std::size_t>(std::ceil(span / cfg.dt - 1e-9));
    const double step = span / static_cast<double>(steps);
    for (std::size_t s = 0; s < steps; ++s) {
      const double t0 = t + static_cast<double>(s) * step;
      forcing.evaluate(t0 + 0.5 * step, f);
      const auto fv = f.component(0);
      burgers_rhs(u, fv, cfg.nu, h, k1);
      for (std::size_t i = 0; i < n; ++i) stage[i] = u[i] + step * k1[i];
      burgers_rhs(stage, fv, cfg.nu, h, k2);
      double umax = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        u[i] += 0.5 * step * (k1[i] + k2[i]);
        umax = std::max(umax, std::abs(u[i]));
      }
      if (!std::isfinite(umax)) {
        throw InstabilityError("Burgers solution became non-finite at t = " +
                               std::to_string(t0 + step));
      }
      if (umax * step / h > 1.0) {
        std::ostringstream msg;
        msg << "Courant number " << umax * step / h << " exceeds 1 at t = " << t0 + step
            << "; reduce dt or increase nu";
        throw ConfigError(msg.str());
      }
    }
    t = target;
  };

  for (std::size_t k = 0; k < M; ++k) {
    advance(times[k]);
    snaps.emplace_back(grid, 1, u);
  }
  return {SnapshotSet(grid, std::move(times), std::move(snaps)), std::move(forcing)};
}

void SyntheticChannelConfig::validate() const {
  for (std::size_t a = 0; a < 3; ++a) {
    if (dims[a] < 4) throw ConfigError("channel dims must each be at least 4");
    if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a])) {
      throw ConfigError("channel lengths must be finite and positive");
    }
  }
  if (n_snapshots < 2) throw ConfigError("n_snapshots must be at least 2");
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!std::isfinite(spectrum_slope) || !std::isfinite(mean_profile_amplitude)) {
    throw ConfigError("spectrum_slope and mean_profile_amplitude must be finite");
  }
}

SyntheticChannelConfig SyntheticChannelConfig::from_config(const KeyValueConfig& kv) {
  kv.require_known({"dims", "lengths", "n_modes", "spectrum_slope", "mean_profile_amplitude",
                    "n_snapshots", "seed", "dt"});
  SyntheticChannelConfig c;
  const auto d = get_triple<double>(kv, "dims",
                                    {static_cast<double>(c.dims[0]), static_cast<double>(c.dims[1]),
                                     static_cast<double>(c.dims[2])});
  for (std::size_t a = 0; a < 3; ++a) {
    if (d[a] < 0.0 || d[a] != std::floor(d[a])) throw ConfigError("dims must be integers");
    c.dims[a] = static_cast<std::size_t>(d[a]);
  }
  c.lengths = get_triple<double>(kv, "lengths", c.lengths);
  c.n_modes = get_count(kv, "n_modes", c.n_modes);
  c.spectrum_slope = kv.get_double("spectrum_slope", c.spectrum_slope);
  c.mean_profile_amplitude = kv.get_double("mean_profile_amplitude", c.mean_profile_amplitude);
  c.n_snapshots = get_count(kv, "n_snapshots", c.n_snapshots);
  c.seed = get_seed(kv, c.seed);
  c.dt = kv.get_double("dt", c.dt);
  c.validate();
  return c;
}

Grid channel_grid(const SyntheticChannelConfig& cfg) {
  const auto& n = cfg.dims;
  const auto& L = cfg.lengths;
  return Grid({n[0], n[1], n[2]},
              {L[0] / static_cast<double>(n[0]), L[1] / static_cast<double>(n[1] - 1),
               L[2] / static_cast<double>(n[2])},
              {AxisKind::periodic, AxisKind::wall, AxisKind::periodic});
}

SnapshotSet generate_synthetic_channel(const SyntheticChannelConfig& cfg) {
  cfg.validate();
  const Grid grid = channel_grid(cfg);
  const auto [n0, n1, n2] = cfg.dims;
  const auto& L = cfg.lengths;

  struct Mode {
    double kx, kz, amp, phase, omega;
    long ny;
    std::array<double, 3> dir;
  };
  Xoshiro256 rng(cfg.seed);
  const long mx = std::max<long>(1, static_cast<long>(n0) / 4);
  const long mz = std::max<long>(1, static_cast<long>(n2) / 4);
  const long my = std::max<long>(1, static_cast<long>(n1) / 4);
  auto draw_int = [&](long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<long>(rng.next() % span);
  };
  std::vector<Mode> modes(cfg.n_modes);
  for (auto& m : modes) {
    long ix = 0, iz = 0;
    while (ix == 0 && iz == 0) {
      ix = draw_int(-mx, mx);
      iz = draw_int(-mz, mz);
    }
    m.ny = draw_int(1, my);
    m.kx = kTwoPi * static_cast<double>(ix) / L[0];
    m.kz = kTwoPi * static_cast<double>(iz) / L[2];
    const double ky = std::numbers::pi * static_cast<double>(m.ny) / L[1];
    const double k = std::sqrt(m.kx * m.kx + ky * ky + m.kz * m.kz);
    m.amp = std::pow(k, 0.5 * cfg.spectrum_slope);
    m.phase = rng.uniform(0.0, kTwoPi);
    m.omega = rng.normal();
    double norm = 0.0;
    while (norm < 1e-8) {
      for (auto& c : m.dir) c = rng.normal();
      norm = std::sqrt(m.dir[0] * m.dir[0] + m.dir[1] * m.dir[1] + m.dir[2] * m.dir[2]);
    }
    for (auto& c : m.dir) c /= norm;
  }

  // wall-normal shape functions, exactly zero on both walls
  std::vector<double> mean(n1, 0.0);
  std::vector<std::vector<double>> shape(modes.size(), std::vector<double>(n1, 0.0));
  for (std::size_t j = 0; j < n1; ++j) {
    const double eta = 2.0 * static_cast<double>(j) / static_cast<double>(n1 - 1) - 1.0;
    mean[j] = cfg.mean_profile_amplitude * (1.0 - eta * eta);
    if (j == 0 || j == n1 - 1) continue;
    for (std::size_t m = 0; m < modes.size(); ++m) {
      shape[m][j] = std::sin(std::numbers::pi * static_cast<double>(modes[m].ny) *
                             static_cast<double>(j) / static_cast<double>(n1 - 1));
    }
  }

  std::vector<double> times(cfg.n_snapshots);
  std::vector<VelocityField> snaps;
  snaps.reserve(cfg.n_snapshots);
  for (std::size_t s = 0; s < cfg.n_snapshots; ++s) {
    const double t = static_cast<double>(s) * cfg.dt;
    times[s] = t;
    VelocityField u(grid, 3);
    auto ux = u.component(0);
    for (std::size_t i = 0; i < n0; ++i) {
      for (std::size_t j = 0; j < n1; ++j) {
        for (std::size_t k = 0; k < n2; ++k) ux[(i * n1 + j) * n2 + k] = mean[j];
      }
    }
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const Mode& md = modes[m];
      for (std::size_t i = 0; i < n0; ++i) {
        const double x = grid.coordinate(0, i);
        for (std::size_t k = 0; k < n2; ++k) {
          const double z = grid.coordinate(2, k);
          const double wave = md.amp * std::cos(md.kx * x + md.kz * z + md.phase + md.omega * t);
          for (std::size_t j = 1; j + 1 < n1; ++j) {
            const double v = wave * shape[m][j];
            const std::size_t node = (i * n1 + j) * n2 + k;
            for (std::size_t c = 0; c < 3; ++c) u.component(c)[node] += md.dir[c] * v;
          }
        }
      }
    }
    snaps.push_back(std::move(u));
  }
  return SnapshotSet(grid, std::move(times), std::move(snaps));
}

}  // namespace romscale
