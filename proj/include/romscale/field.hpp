#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace romscale {

enum class AxisKind { periodic, wall };

/// Uniform tensor-product grid with 1 to 3 axes, stored row-major (last axis
/// fastest). Periodic axes hold `dims` distinct nodes over their length;
/// wall axes include both boundary nodes.
class Grid {
 public:
  Grid(std::vector<std::size_t> dims, std::vector<double> spacing,
       std::vector<AxisKind> kinds);

  std::size_t rank() const { return dims_.size(); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  const std::vector<double>& spacing() const { return spacing_; }
  const std::vector<AxisKind>& kinds() const { return kinds_; }
  std::size_t node_count() const { return node_count_; }

  double length(std::size_t axis) const;
  std::vector<double> lengths() const;
  double measure() const;

  /// Coarsest resolved scale: the largest spacing over all axes.
  double meshsize() const;

  /// First wall-bounded axis, if any.
  std::optional<std::size_t> wall_axis() const;

  /// Stride of `axis` in the row-major node index.
  std::size_t stride(std::size_t axis) const { return strides_[axis]; }

  /// Tensor-product quadrature weights, one per node. Trapezoidal on wall
  /// axes, rectangle rule on periodic axes; all strictly positive.
  std::span<const double> weights() const { return *weights_; }

  double coordinate(std::size_t axis, std::size_t index) const {
    return static_cast<double>(index) * spacing_[axis];
  }

  bool operator==(const Grid& other) const;

 private:
  std::vector<std::size_t> dims_;
  std::vector<double> spacing_;
  std::vector<AxisKind> kinds_;
  std::vector<std::size_t> strides_;
  std::size_t node_count_ = 0;
  std::shared_ptr<const std::vector<double>> weights_;
};

/// Velocity samples on a grid. Components are stored back to back, each
/// row-major, so `values()` is exactly the on-disk layout of one snapshot.
class VelocityField {
 public:
  VelocityField(Grid grid, std::size_t components);
  VelocityField(Grid grid, std::size_t components, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  std::size_t components() const { return components_; }
  std::size_t node_count() const { return grid_.node_count(); }

  std::span<double> component(std::size_t c) {
    return {values_.data() + c * node_count(), node_count()};
  }
  std::span<const double> component(std::size_t c) const {
    return {values_.data() + c * node_count(), node_count()};
  }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool is_finite() const;
  bool same_layout(const VelocityField& other) const;

  VelocityField& operator+=(const VelocityField& other);
  VelocityField& operator-=(const VelocityField& other);
  VelocityField& operator*=(double s);
  /// this += s * other
  void axpy(double s, const VelocityField& other);

 private:
  Grid grid_;
  std::size_t components_;
  std::vector<double> values_;
};

VelocityField operator+(VelocityField a, const VelocityField& b);
VelocityField operator-(VelocityField a, const VelocityField& b);
VelocityField operator*(double s, VelocityField a);

/// Time-ordered snapshots sharing one grid and component count.
class SnapshotSet {
 public:
  SnapshotSet(Grid grid, std::vector<double> times,
              std::vector<VelocityField> snapshots);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return snapshots_.size(); }
  std::size_t components() const { return snapshots_.front().components(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<VelocityField>& snapshots() const { return snapshots_; }
  const VelocityField& operator[](std::size_t k) const { return snapshots_[k]; }

 private:
  Grid grid_;
  std::vector<double> times_;
  std::vector<VelocityField> snapshots_;
};

/// Spatial derivatives of every component along every axis.
/// Layout: [(component * rank + axis) * nodes + node].
class FieldGradient {
 public:
  FieldGradient(Grid grid, std::size_t components);

  const Grid& grid() const { return grid_; }
  std::size_t components() const { return components_; }

  std::span<double> at(std::size_t component, std::size_t axis) {
    return {data_.data() + offset(component, axis), grid_.node_count()};
  }
  std::span<const double> at(std::size_t component, std::size_t axis) const {
    return {data_.data() + offset(component, axis), grid_.node_count()};
  }
  std::span<const double> values() const { return data_; }
  std::span<double> values() { return data_; }

 private:
  std::size_t offset(std::size_t c, std::size_t a) const {
    return (c * grid_.rank() + a) * grid_.node_count();
  }
  Grid grid_;
  std::size_t components_;
  std::vector<double> data_;
};

/// L2 inner product with the grid's quadrature weights.
double inner_product(const VelocityField& f, const VelocityField& g);

/// Sum over components and axes of the L2 products of derivatives.
double gradient_inner_product(const FieldGradient& f, const FieldGradient& g);

/// Second-order finite differences: central in the interior and across
/// periodic boundaries, one-sided at wall boundaries.
FieldGradient gradient(const VelocityField& f);

/// Derivative of one scalar array along one axis; `out` must not alias `in`.
void differentiate(const Grid& grid, std::size_t axis, std::span<const double> in,
                   std::span<double> out);

}  // namespace romscale
