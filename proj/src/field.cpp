#include "romscale/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "romscale/error.hpp"

namespace romscale {

namespace {

std::vector<double> axis_weights(std::size_t n, double h, AxisKind kind) {
  std::vector<double> w(n, h);
  if (kind == AxisKind::wall) {
    w.front() = 0.5 * h;
    w.back() = 0.5 * h;
  }
  return w;
}

}  // namespace

Grid::Grid(std::vector<std::size_t> dims, std::vector<double> spacing,
           std::vector<AxisKind> kinds)
    : dims_(std::move(dims)), spacing_(std::move(spacing)), kinds_(std::move(kinds)) {
  if (dims_.empty() || dims_.size() > 3) {
    throw ShapeError("grid must have 1 to 3 axes, got " + std::to_string(dims_.size()));
  }
  if (spacing_.size() != dims_.size() || kinds_.size() != dims_.size()) {
    throw ShapeError("grid dims, spacing and axis kinds must have equal length");
  }
  for (std::size_t a = 0; a < dims_.size(); ++a) {
    if (dims_[a] < 2) {
      throw ShapeError("grid axis " + std::to_string(a) + " needs at least 2 nodes");
    }
    if (!(spacing_[a] > 0.0) || !std::isfinite(spacing_[a])) {
      throw ShapeError("grid spacing on axis " + std::to_string(a) +
                       " must be finite and positive");
    }
  }

  strides_.assign(dims_.size(), 1);
  for (std::size_t a = dims_.size() - 1; a > 0; --a) {
    strides_[a - 1] = strides_[a] * dims_[a];
  }
  node_count_ = strides_[0] * dims_[0];

  std::vector<std::vector<double>> per_axis;
  for (std::size_t a = 0; a < dims_.size(); ++a) {
    per_axis.push_back(axis_weights(dims_[a], spacing_[a], kinds_[a]));
  }
  auto w = std::make_shared<std::vector<double>>(node_count_);
  for (std::size_t n = 0; n < node_count_; ++n) {
    double value = 1.0;
    for (std::size_t a = 0; a < dims_.size(); ++a) {
      value *= per_axis[a][(n / strides_[a]) % dims_[a]];
    }
    (*w)[n] = value;
  }
  weights_ = std::move(w);
}

double Grid::length(std::size_t axis) const {
  const double n = static_cast<double>(dims_[axis]);
  return kinds_[axis] == AxisKind::periodic ? n * spacing_[axis]
                                            : (n - 1.0) * spacing_[axis];
}

std::vector<double> Grid::lengths() const {
  std::vector<double> out(rank());
  for (std::size_t a = 0; a < rank(); ++a) out[a] = length(a);
  return out;
}

double Grid::measure() const {
  double m = 1.0;
  for (std::size_t a = 0; a < rank(); ++a) m *= length(a);
  return m;
}

double Grid::meshsize() const { return *std::max_element(spacing_.begin(), spacing_.end()); }

std::optional<std::size_t> Grid::wall_axis() const {
  for (std::size_t a = 0; a < rank(); ++a) {
    if (kinds_[a] == AxisKind::wall) return a;
  }
  return std::nullopt;
}

bool Grid::operator==(const Grid& other) const {
  return dims_ == other.dims_ && spacing_ == other.spacing_ && kinds_ == other.kinds_;
}

VelocityField::VelocityField(Grid grid, std::size_t components)
    : grid_(std::move(grid)), components_(components) {
  if (components_ < 1 || components_ > 3) {
    throw ShapeError("velocity fields carry 1 to 3 components");
  }
  values_.assign(components_ * grid_.node_count(), 0.0);
}

VelocityField::VelocityField(Grid grid, std::size_t components, std::vector<double> values)
    : grid_(std::move(grid)), components_(components), values_(std::move(values)) {
  if (components_ < 1 || components_ > 3) {
    throw ShapeError("velocity fields carry 1 to 3 components");
  }
  if (values_.size() != components_ * grid_.node_count()) {
    throw ShapeError("field payload has " + std::to_string(values_.size()) +
                     " values, expected " +
                     std::to_string(components_ * grid_.node_count()));
  }
}

bool VelocityField::is_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

bool VelocityField::same_layout(const VelocityField& other) const {
  return components_ == other.components_ && grid_ == other.grid_;
}

namespace {
void require_same_layout(const VelocityField& a, const VelocityField& b) {
  if (!a.same_layout(b)) {
    throw ShapeError("fields differ in grid or component count");
  }
}
}  // namespace

VelocityField& VelocityField::operator+=(const VelocityField& other) {
  require_same_layout(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

VelocityField& VelocityField::operator-=(const VelocityField& other) {
  require_same_layout(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

VelocityField& VelocityField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

void VelocityField::axpy(double s, const VelocityField& other) {
  require_same_layout(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * other.values_[i];
}

VelocityField operator+(VelocityField a, const VelocityField& b) { return a += b; }
VelocityField operator-(VelocityField a, const VelocityField& b) { return a -= b; }
VelocityField operator*(double s, VelocityField a) { return a *= s; }

SnapshotSet::SnapshotSet(Grid grid, std::vector<double> times,
                         std::vector<VelocityField> snapshots)
    : grid_(std::move(grid)), times_(std::move(times)), snapshots_(std::move(snapshots)) {
  if (snapshots_.size() < 2) {
    throw ValidationError("a snapshot set needs at least 2 snapshots");
  }
  if (times_.size() != snapshots_.size()) {
    throw ValidationError("snapshot set has " + std::to_string(snapshots_.size()) +
                          " snapshots but " + std::to_string(times_.size()) + " times");
  }
  for (std::size_t k = 1; k < times_.size(); ++k) {
    if (!(times_[k] > times_[k - 1])) {
      throw ValidationError("snapshot times must be strictly increasing (index " +
                            std::to_string(k) + ")");
    }
  }
  const std::size_t d = snapshots_.front().components();
  for (const auto& s : snapshots_) {
    if (!(s.grid() == grid_) || s.components() != d) {
      throw ShapeError("all snapshots must share the set's grid and component count");
    }
    if (!s.is_finite()) throw ValidationError("snapshot contains non-finite values");
  }
}

FieldGradient::FieldGradient(Grid grid, std::size_t components)
    : grid_(std::move(grid)), components_(components) {
  data_.assign(components_ * grid_.rank() * grid_.node_count(), 0.0);
}

double inner_product(const VelocityField& f, const VelocityField& g) {
  require_same_layout(f, g);
  const auto w = f.grid().weights();
  double total = 0.0;
  for (std::size_t c = 0; c < f.components(); ++c) {
    const auto a = f.component(c);
    const auto b = g.component(c);
    double s = 0.0;
    for (std::size_t n = 0; n < w.size(); ++n) s += w[n] * a[n] * b[n];
    total += s;
  }
  return total;
}

double gradient_inner_product(const FieldGradient& f, const FieldGradient& g) {
  if (!(f.grid() == g.grid()) || f.components() != g.components()) {
    throw ShapeError("gradients differ in grid or component count");
  }
  const auto w = f.grid().weights();
  const auto a = f.values();
  const auto b = g.values();
  const std::size_t nodes = w.size();
  double total = 0.0;
  for (std::size_t block = 0; block < a.size() / nodes; ++block) {
    double s = 0.0;
    const std::size_t off = block * nodes;
    for (std::size_t n = 0; n < nodes; ++n) s += w[n] * a[off + n] * b[off + n];
    total += s;
  }
  return total;
}

void differentiate(const Grid& grid, std::size_t axis, std::span<const double> in,
                   std::span<double> out) {
  const std::size_t n = grid.dims()[axis];
  const std::size_t stride = grid.stride(axis);
  const std::size_t outer = grid.node_count() / (n * stride);
  const double h = grid.spacing()[axis];
  const double inv2h = 1.0 / (2.0 * h);
  const bool periodic = grid.kinds()[axis] == AxisKind::periodic;

  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t s = 0; s < stride; ++s) {
      const std::size_t base = o * n * stride + s;
      auto at = [&](std::size_t i) { return in[base + i * stride]; };
      for (std::size_t i = 1; i + 1 < n; ++i) {
        out[base + i * stride] = (at(i + 1) - at(i - 1)) * inv2h;
      }
      if (periodic) {
        out[base] = (at(1) - at(n - 1)) * inv2h;
        out[base + (n - 1) * stride] = (at(0) - at(n - 2)) * inv2h;
      } else if (n >= 3) {
        out[base] = (-3.0 * at(0) + 4.0 * at(1) - at(2)) * inv2h;
        out[base + (n - 1) * stride] = (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) * inv2h;
      } else {
        // two-node wall axis: only a first-order difference exists
        const double d = (at(1) - at(0)) / h;
        out[base] = d;
        out[base + stride] = d;
      }
    }
  }
}

FieldGradient gradient(const VelocityField& f) {
  FieldGradient g(f.grid(), f.components());
  for (std::size_t c = 0; c < f.components(); ++c) {
    for (std::size_t a = 0; a < f.grid().rank(); ++a) {
      differentiate(f.grid(), a, f.component(c), g.at(c, a));
    }
  }
  return g;
}

}  // namespace romscale
