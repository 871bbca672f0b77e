#pragma once

#include <vector>

#include "romscale/calibrate.hpp"
#include "romscale/pod.hpp"
#include "romscale/rom_operators.hpp"
#include "romscale/testbed.hpp"

namespace romscale {

/// Burgers FOM, its POD basis and Galerkin operators up to r_ops modes,
/// with the derived quantities the stability experiments need.
class BurgersExperiment {
 public:
  explicit BurgersExperiment(const BurgersConfig& cfg, std::size_t r_ops = 50);

  const BurgersConfig& config() const { return config_; }
  const SnapshotSet& snapshots() const { return fom_.snapshots; }
  const SeparableForcing& forcing() const { return fom_.forcing; }
  const PODBasis& basis() const { return basis_; }
  const ROMOperators& operators() const { return ops_; }
  /// Full-rank projections of every snapshot.
  const std::vector<std::vector<double>>& coefficients() const { return coeffs_; }

  double h() const { return h_; }
  double L() const { return L_; }
  double U_ML() const { return U_ML_; }
  double max_snapshot_ke() const { return max_ke_; }
  double mean_snapshot_ke() const { return mean_ke_; }
  /// Snapshot spacing, used as the ROM time step.
  double dt() const { return dt_; }

  double delta1(std::size_t r) const;
  double delta2(std::size_t r) const;
  double delta(std::size_t r, DeltaKind kind) const;

  /// Operators truncated to r, initial data from the first two snapshots.
  CalibrationCase make_case(std::size_t r, DeltaKind kind) const;
  CalibrationSetup setup(std::size_t n_steps, double ke_blowup_factor = 10.0) const;

 private:
  BurgersConfig config_;
  BurgersRun fom_;
  PODBasis basis_;
  ROMOperators ops_;
  std::vector<std::vector<double>> coeffs_;
  double h_ = 0.0, L_ = 0.0, U_ML_ = 0.0, max_ke_ = 0.0, mean_ke_ = 0.0, dt_ = 0.0;
};

}  // namespace romscale
