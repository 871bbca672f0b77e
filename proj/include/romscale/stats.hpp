#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "romscale/field.hpp"
#include "romscale/rom_operators.hpp"

namespace romscale {

/// (1/2) int sum_i u_i^2
double kinetic_energy(const VelocityField& field);
/// Same quantity for U + sum_j a_j phi_j using the cached <U,U>, <U,phi_j>
/// and M_jk of the operators.
double kinetic_energy(const ROMOperators& ops, const Eigen::VectorXd& a);

/// Largest snapshot kinetic energy, the reference for the blow-up bound.
double max_kinetic_energy(const SnapshotSet& set);

struct ReynoldsStress {
  /// Scalar tensor: the profile averaged over the wall-normal axis with
  /// normalized trapezoid weights (the plain profile when there is no wall).
  Eigen::MatrixXd tensor;
  /// Wall-normal coordinates, or a single 0 without a wall axis.
  std::vector<double> y;
  /// Covariance at each wall-normal node, averaged over the periodic axes
  /// and over time.
  std::vector<Eigen::MatrixXd> profile;
  /// Space (periodic axes) and time average of u_1 at each wall-normal node.
  std::vector<double> U_mean_profile;
};

/// Streams fields one at a time so ROM reconstructions need not be stored.
class ReynoldsAccumulator {
 public:
  ReynoldsAccumulator(const Grid& grid, std::size_t components);
  void add(const VelocityField& field);
  std::size_t count() const { return count_; }
  /// Needs at least two fields.
  ReynoldsStress finish() const;

 private:
  Grid grid_;
  std::size_t d_;
  std::size_t rows_;
  std::vector<std::size_t> row_of_node_;
  std::vector<double> row_count_;
  std::vector<double> sum_u_;   // [row * d + i]
  std::vector<double> sum_uu_;  // [(row * d + i) * d + j]
  std::size_t count_ = 0;
};

ReynoldsStress reynolds_stress(const SnapshotSet& set);

/// |R11 - tr(R)/3|^(1/2) / u_tau; needs a 3x3 tensor.
double u_rms(const Eigen::MatrixXd& R, double u_tau);
/// R12 / u_tau^2; needs at least 2 components.
double r12(const Eigen::MatrixXd& R, double u_tau);
/// sqrt(nu U_mean(y_min) / y_min). Negative U_mean is a DomainError.
double friction_velocity(double U_mean_at_ymin, double nu, double y_min);
/// Uses the first off-wall node of the profile.
double friction_velocity(const ReynoldsStress& rs, double nu);

struct StatsReport {
  std::vector<double> ke_series;
  ReynoldsStress reynolds;
  std::optional<double> u_tau;
  std::optional<double> U_rms;
  std::optional<double> R12;
};

/// U_RMS and R12 are filled only when the tensor has the components they
/// need and a friction velocity exists (wall axis present).
StatsReport make_report(std::vector<double> ke_series, ReynoldsStress rs, double nu);

}  // namespace romscale
