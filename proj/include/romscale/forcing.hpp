#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "romscale/field.hpp"

namespace romscale {

/// Body force written as a finite sum of fixed spatial patterns with
/// harmonic time modulation:
///
///   f(x, t) = sum_p cos(omega_p * t + phase_p) * F_p(x)
///
/// A steady pattern has omega = phase = 0. The separable form lets a
/// Galerkin model project every pattern once and rebuild the forcing at any
/// time from the modulation vector alone.
class SeparableForcing {
 public:
  SeparableForcing() = default;
  SeparableForcing(std::vector<VelocityField> patterns, std::vector<double> omega,
                   std::vector<double> phase);

  std::size_t size() const { return patterns_.size(); }
  bool empty() const { return patterns_.empty(); }
  const std::vector<VelocityField>& patterns() const { return patterns_; }
  const std::vector<double>& omega() const { return omega_; }
  const std::vector<double>& phase() const { return phase_; }

  std::vector<double> modulation(double t) const;
  /// f(., t) written into `out` (same layout as the patterns).
  void evaluate(double t, VelocityField& out) const;
  /// Time average over a long window: the sum of the steady patterns.
  VelocityField steady_part() const;

 private:
  std::vector<VelocityField> patterns_;
  std::vector<double> omega_;
  std::vector<double> phase_;
};

/// Stored under <dir>/forcing/: forcing.json (omega, phase, components)
/// plus one pattern_%06d.bin per pattern in the snapshot binary layout.
void write_forcing(const SeparableForcing& forcing, const std::filesystem::path& dir);
/// Returns nullopt when <dir>/forcing/ does not exist.
std::optional<SeparableForcing> read_forcing(const std::filesystem::path& dir, const Grid& grid);

}  // namespace romscale
