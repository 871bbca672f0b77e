#include "romscale/lengthscale.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <string>

#include "romscale/error.hpp"
#include "romscale/parallel.hpp"

namespace romscale {

namespace {

constexpr double kTwoThirds = 2.0 / 3.0;

VelocityField tail_field(const PODBasis& basis, const std::vector<double>& a, std::size_t r) {
  VelocityField u(basis.grid(), basis.components());
  for (std::size_t j = r; j < basis.size(); ++j) u.axpy(a[j], basis.mode(j));
  return u;
}

}  // namespace

double characteristic_length(const Grid& grid) {
  if (const auto wall = grid.wall_axis()) return grid.length(*wall);
  const auto lengths = grid.lengths();
  return *std::max_element(lengths.begin(), lengths.end());
}

VelocityField fluctuation_field(const PODBasis& basis, const SnapshotSet& set, std::size_t r,
                                std::size_t k) {
  if (r > basis.size()) {
    throw ValidationError("r = " + std::to_string(r) + " exceeds R = " +
                          std::to_string(basis.size()));
  }
  if (k >= set.size()) throw ValidationError("snapshot index out of range");
  if (r == basis.size()) {
    std::cerr << "warning: r = R leaves no unresolved modes; fluctuation is zero\n";
    return VelocityField(basis.grid(), basis.components());
  }
  return tail_field(basis, project(basis, set[k], basis.size()), r);
}

std::vector<std::vector<double>> full_coefficients(const PODBasis& basis, const SnapshotSet& set) {
  return project_all(basis, set, basis.size());
}

Delta1Terms delta1_terms(const PODBasis& basis, const std::vector<std::vector<double>>& coeffs,
                         std::size_t r) {
  if (r >= basis.size()) {
    throw ValidationError("delta1 needs r < R (r = " + std::to_string(r) + ", R = " +
                          std::to_string(basis.size()) + "): no unresolved scales");
  }
  const std::size_t M = coeffs.size();
  if (M == 0) throw ValidationError("delta1 needs at least one snapshot");
  std::vector<double> num(M), den(M);
  parallel_for(M, [&](std::size_t k) {
    if (coeffs[k].size() != basis.size()) throw ShapeError("coefficient rows must have length R");
    const VelocityField u = tail_field(basis, coeffs[k], r);
    const FieldGradient g = gradient(u);
    num[k] = inner_product(u, u);
    den[k] = gradient_inner_product(g, g);
  });
  Delta1Terms t;
  for (std::size_t k = 0; k < M; ++k) {
    t.energy += num[k];
    t.gradient_energy += den[k];
  }
  t.energy /= static_cast<double>(M);
  t.gradient_energy /= static_cast<double>(M);
  return t;
}

double delta1(const PODBasis& basis, const std::vector<std::vector<double>>& coeffs,
              std::size_t r) {
  const Delta1Terms t = delta1_terms(basis, coeffs, r);
  if (!(t.gradient_energy > 0.0)) {
    throw NumericalError("fluctuation gradient energy is zero; delta1 is undefined");
  }
  return std::sqrt(t.energy / t.gradient_energy);
}

double delta1(const PODBasis& basis, const SnapshotSet& set, std::size_t r) {
  if (r >= basis.size()) return delta1(basis, std::vector<std::vector<double>>{}, r);
  return delta1(basis, full_coefficients(basis, set), r);
}

void LengthscaleInputs::validate() const {
  if (!(h > 0.0) || !(h < L) || !std::isfinite(L)) {
    throw DomainError("lengthscale inputs need 0 < h < L (h = " + std::to_string(h) +
                      ", L = " + std::to_string(L) + ")");
  }
  if (R != lambda.size()) throw ShapeError("R must equal the number of eigenvalues");
  if (r < 1 || r > R) {
    throw ValidationError("r = " + std::to_string(r) + " outside 1.." + std::to_string(R));
  }
}

double delta2(double lambda_ratio, double h, double L) {
  if (!(h > 0.0) || !(h < L) || !std::isfinite(L)) {
    throw DomainError("delta2 needs 0 < h < L");
  }
  if (!(lambda_ratio >= 0.0 && lambda_ratio <= 1.0)) {
    throw DomainError("energy ratio must lie in [0, 1], got " + std::to_string(lambda_ratio));
  }
  if (lambda_ratio == 1.0) return h;
  if (lambda_ratio == 0.0) return L;
  const double s = lambda_ratio * std::pow(h, kTwoThirds) +
                   (1.0 - lambda_ratio) * std::pow(L, kTwoThirds);
  return std::pow(s, 1.5);
}

double delta2(const LengthscaleInputs& in) {
  in.validate();
  return delta2(energy_ratio(in.lambda, in.r), in.h, in.L);
}

double invert_delta2(double d2, double h, double L) {
  if (!(h > 0.0) || !(h < L) || !std::isfinite(L)) {
    throw DomainError("invert_delta2 needs 0 < h < L");
  }
  if (!(d2 >= h && d2 <= L)) {
    throw DomainError("delta2 = " + std::to_string(d2) + " outside [h, L] = [" +
                      std::to_string(h) + ", " + std::to_string(L) + "]");
  }
  if (d2 == h) return 1.0;
  if (d2 == L) return 0.0;
  const double l23 = std::pow(L, kTwoThirds);
  return (l23 - std::pow(d2, kTwoThirds)) / (l23 - std::pow(h, kTwoThirds));
}

ConvexityCheck convexity_check(const LengthscaleInputs& in) {
  in.validate();
  constexpr double two_pi = 2.0 * std::numbers::pi;
  ConvexityCheck c;
  c.weight = energy_ratio(in.lambda, in.r);
  c.k0 = two_pi / in.L;
  c.kh = two_pi / in.h;
  c.k_cutoff = two_pi / delta2(c.weight, in.h, in.L);
  const double lhs = std::pow(c.k_cutoff, -kTwoThirds);
  const double rhs = c.weight * std::pow(c.kh, -kTwoThirds) +
                     (1.0 - c.weight) * std::pow(c.k0, -kTwoThirds);
  c.relative_residual = std::abs(lhs - rhs) / lhs;
  return c;
}

std::vector<LengthscaleReport> lengthscale_table(const PODBasis& basis, const SnapshotSet* set,
                                                 const std::vector<std::size_t>& rs, double h,
                                                 double L) {
  std::vector<std::vector<double>> coeffs;
  if (set != nullptr) coeffs = full_coefficients(basis, *set);
  std::vector<LengthscaleReport> out;
  for (const std::size_t r : rs) {
    LengthscaleReport rep;
    rep.r = r;
    rep.lambda_ratio = energy_ratio(basis, r);
    rep.delta2 = delta2(rep.lambda_ratio, h, L);
    rep.k_cutoff = 2.0 * std::numbers::pi / rep.delta2;
    if (set != nullptr && r < basis.size()) rep.delta1 = delta1(basis, coeffs, r);
    out.push_back(rep);
  }
  return out;
}

}  // namespace romscale
