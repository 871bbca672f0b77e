#pragma once

#include <optional>
#include <vector>

#include "romscale/field.hpp"
#include "romscale/pod.hpp"

namespace romscale {

/// Wall-normal axis length when the grid has a wall axis, otherwise the
/// largest axis length.
double characteristic_length(const Grid& grid);

/// u'(x, t_k) = sum_{j>r} a_j(t_k) phi_j with a from a full projection.
/// r = R returns the zero field and prints a warning on stderr.
VelocityField fluctuation_field(const PODBasis& basis, const SnapshotSet& set, std::size_t r,
                                std::size_t k);

/// Time-averaged numerator and denominator of delta1^2.
struct Delta1Terms {
  double energy = 0.0;           // (1/M) sum_k ||u'_k||^2
  double gradient_energy = 0.0;  // (1/M) sum_k ||grad u'_k||^2
};

/// Full-rank projection coefficients, one row per snapshot; computing them
/// once lets a table over many r reuse them.
std::vector<std::vector<double>> full_coefficients(const PODBasis& basis, const SnapshotSet& set);

Delta1Terms delta1_terms(const PODBasis& basis, const std::vector<std::vector<double>>& coeffs,
                         std::size_t r);

/// delta1 = sqrt(N / D), time averages taken separately. Requires r < R.
double delta1(const PODBasis& basis, const SnapshotSet& set, std::size_t r);
double delta1(const PODBasis& basis, const std::vector<std::vector<double>>& coeffs,
              std::size_t r);

struct LengthscaleInputs {
  double h = 0.0;
  double L = 0.0;
  std::vector<double> lambda;
  std::size_t R = 0;
  std::size_t r = 0;

  void validate() const;
};

/// [Lambda h^(2/3) + (1 - Lambda) L^(2/3)]^(3/2); Lambda = 1 and 0 map to
/// h and L exactly.
double delta2(double lambda_ratio, double h, double L);
double delta2(const LengthscaleInputs& in);

/// Lambda such that delta2(Lambda, h, L) = d2. DomainError outside [h, L].
double invert_delta2(double d2, double h, double L);

struct ConvexityCheck {
  double k0 = 0.0;
  double kh = 0.0;
  double k_cutoff = 0.0;
  double weight = 0.0;
  /// |k_c^(-2/3) - (w kh^(-2/3) + (1-w) k0^(-2/3))| / k_c^(-2/3)
  double relative_residual = 0.0;
};
ConvexityCheck convexity_check(const LengthscaleInputs& in);

struct LengthscaleReport {
  std::size_t r = 0;
  std::optional<double> delta1;
  double delta2 = 0.0;
  double lambda_ratio = 0.0;
  double k_cutoff = 0.0;
};

/// One report per requested r. delta1 is filled when `set` is given and
/// r < R.
std::vector<LengthscaleReport> lengthscale_table(const PODBasis& basis, const SnapshotSet* set,
                                                 const std::vector<std::size_t>& rs, double h,
                                                 double L);

}  // namespace romscale
