#include "romscale/experiment.hpp"

#include <algorithm>

#include "romscale/error.hpp"
#include "romscale/lengthscale.hpp"
#include "romscale/rom_integrators.hpp"
#include "romscale/stats.hpp"

namespace romscale {

BurgersExperiment::BurgersExperiment(const BurgersConfig& cfg, std::size_t r_ops)
    : config_(cfg),
      fom_(run_burgers(cfg)),
      basis_(compute_pod(fom_.snapshots)),
      ops_(assemble(basis_, std::min(r_ops, basis_.size()), cfg.nu, fom_.forcing)),
      coeffs_(full_coefficients(basis_, fom_.snapshots)) {
  const SnapshotSet& set = fom_.snapshots;
  h_ = set.grid().meshsize();
  L_ = characteristic_length(set.grid());
  U_ML_ = default_ml_velocity(basis_.mean_field());
  max_ke_ = max_kinetic_energy(set);
  double sum = 0.0;
  for (const auto& s : set.snapshots()) sum += kinetic_energy(s);
  mean_ke_ = sum / static_cast<double>(set.size());
  dt_ = set.times()[1] - set.times()[0];
}

double BurgersExperiment::delta1(std::size_t r) const { return romscale::delta1(basis_, coeffs_, r); }

double BurgersExperiment::delta2(std::size_t r) const {
  return romscale::delta2(energy_ratio(basis_, r), h_, L_);
}

double BurgersExperiment::delta(std::size_t r, DeltaKind kind) const {
  switch (kind) {
    case DeltaKind::delta1:
      return delta1(r);
    case DeltaKind::delta2:
      return delta2(r);
    case DeltaKind::explicit_value:
      break;
  }
  throw ValidationError("an explicit lengthscale has no experiment value");
}

CalibrationCase BurgersExperiment::make_case(std::size_t r, DeltaKind kind) const {
  CalibrationCase c;
  c.r = r;
  c.ops = truncate(ops_, r);
  const auto n = static_cast<Eigen::Index>(r);
  c.a0 = Eigen::Map<const Eigen::VectorXd>(coeffs_[0].data(), n);
  c.a1 = Eigen::Map<const Eigen::VectorXd>(coeffs_[1].data(), n);
  c.delta = delta(r, kind);
  return c;
}

CalibrationSetup BurgersExperiment::setup(std::size_t n_steps, double ke_blowup_factor) const {
  CalibrationSetup s;
  s.t0 = fom_.snapshots.times()[0];
  s.dt = dt_;
  s.n_steps = n_steps;
  s.max_snapshot_ke = max_ke_;
  s.ke_blowup_factor = ke_blowup_factor;
  return s;
}

}  // namespace romscale
