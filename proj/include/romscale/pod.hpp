#pragma once

#include <filesystem>
#include <vector>

#include "romscale/field.hpp"

namespace romscale {

class PODBasis {
 public:
  PODBasis(VelocityField mean_field, std::vector<VelocityField> modes,
           std::vector<double> eigenvalues);

  const Grid& grid() const { return mean_.grid(); }
  std::size_t components() const { return mean_.components(); }
  const VelocityField& mean_field() const { return mean_; }
  const std::vector<VelocityField>& modes() const { return modes_; }
  const VelocityField& mode(std::size_t j) const { return modes_[j]; }
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  /// Number of retained modes R.
  std::size_t size() const { return modes_.size(); }

 private:
  VelocityField mean_;
  std::vector<VelocityField> modes_;
  std::vector<double> eigenvalues_;
};

VelocityField compute_mean(const SnapshotSet& set);

/// Method of snapshots on C_kl = <u'_k, u'_l> / M. Keeps modes with
/// lambda > tol * lambda_1, at most r_max of them (r_max = 0: no cap).
/// Modes are re-orthonormalized (two passes of modified Gram-Schmidt in the
/// quadrature inner product) and signed so their largest-magnitude entry is
/// positive. Throws NumericalError on an all-equal snapshot set.
PODBasis compute_pod(const SnapshotSet& set, std::size_t r_max = 0, double tol = 1e-12);

/// a_j = <field - U, phi_j>, j = 1..r.
std::vector<double> project(const PODBasis& basis, const VelocityField& field, std::size_t r);
/// Row k holds project(basis, set[k], r).
std::vector<std::vector<double>> project_all(const PODBasis& basis, const SnapshotSet& set,
                                             std::size_t r);
VelocityField reconstruct(const PODBasis& basis, const std::vector<double>& a);

/// Lambda = sum_{i<=r} lambda_i / sum_{i<=R} lambda_i.
double energy_ratio(const std::vector<double>& eigenvalues, std::size_t r);
double energy_ratio(const PODBasis& basis, std::size_t r);

/// Basis directory: the snapshot container layout with the modes as
/// snapshots (labelled 1..R), plus mean.bin and eigenvalues.json.
void write_basis(const PODBasis& basis, const std::filesystem::path& dir);
PODBasis read_basis(const std::filesystem::path& dir);

}  // namespace romscale
