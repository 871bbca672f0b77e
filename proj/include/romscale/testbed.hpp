#pragma once

#include <array>
#include <cstdint>
#include <numbers>
#include <string>

#include "romscale/field.hpp"
#include "romscale/forcing.hpp"
#include "romscale/key_value.hpp"

namespace romscale {

/// Periodic 1D viscous Burgers problem
///
///   u_t + u u_x = nu u_xx + f(x, t),   x in [0, length)
///
/// The forcing is scaled as a whole by forcing_amplitude:
///
///   f = A * ( steady_forcing * sin(2 pi x / length)
///           + sum_{k=1..forcing_modes} c_k k^forcing_slope
///               * sin(2 pi k x / length + phi_k + omega_k t) )
///
/// with c_k ~ N(0,1), phi_k ~ U(0, 2 pi), omega_k = 2 pi forcing_frequency N(0,1),
/// all drawn from Xoshiro256(seed) in that order (all c, then all phi, then
/// all omega). The steady part drives a standing shock that feeds energy to
/// the fluctuations; the travelling part spreads it across wavenumbers.
struct BurgersConfig {
  std::size_t nx = 512;
  double length = 1.0;
  double nu = 1e-3;
  double forcing_amplitude = 1.0;
  double dt = 2.5e-4;
  double t_collect_start = 2.0;
  double t_collect_end = 6.0;
  std::size_t n_snapshots = 400;
  std::uint64_t seed = 1;

  double steady_forcing = 8.0;
  std::size_t forcing_modes = 64;
  double forcing_slope = 0.5;
  double forcing_frequency = 30.0;
  std::string initial = "zero";  // "zero" or "sine"
  double initial_amplitude = 1.0;

  /// Throws ConfigError, including when dt exceeds the explicit diffusion
  /// limit h^2 / (2 nu).
  void validate() const;
  static BurgersConfig from_config(const KeyValueConfig& kv);
};

struct BurgersRun {
  SnapshotSet snapshots;
  SeparableForcing forcing;
};

Grid burgers_grid(const BurgersConfig& cfg);
SeparableForcing burgers_forcing(const BurgersConfig& cfg);

/// Skew-symmetric central differences in space, Heun (RK2) in time with the
/// forcing frozen at each step's midpoint. Every snapshot time is hit
/// exactly: each interval is split into ceil(interval / dt) equal substeps.
/// Courant number above 1 is a ConfigError, non-finite values an
/// InstabilityError.
BurgersRun run_burgers(const BurgersConfig& cfg);

/// Synthetic channel-like velocity on (periodic x, wall y, periodic z):
///
///   u = amp (1 - (2y/L2 - 1)^2) e_x
///     + sum_m a_m e_m sin(pi n_m y / L2) cos(kx_m x + kz_m z + phi_m + omega_m t)
///
/// with a_m = |k_m|^(spectrum_slope / 2), random unit directions e_m, and
/// integer wavenumbers (nx, nz) != (0, 0) so every mode averages to zero
/// over the periodic plane. Snapshot k sits at t = k * dt.
struct SyntheticChannelConfig {
  std::array<std::size_t, 3> dims{32, 33, 16};
  std::array<double, 3> lengths{4.0 * std::numbers::pi, 2.0, 4.0 * std::numbers::pi / 3.0};
  std::size_t n_modes = 48;
  double spectrum_slope = -5.0 / 3.0;
  double mean_profile_amplitude = 1.0;
  std::size_t n_snapshots = 64;
  std::uint64_t seed = 1;
  double dt = 0.1;

  void validate() const;
  static SyntheticChannelConfig from_config(const KeyValueConfig& kv);
};

Grid channel_grid(const SyntheticChannelConfig& cfg);
SnapshotSet generate_synthetic_channel(const SyntheticChannelConfig& cfg);

}  // namespace romscale
