#include "romscale/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "romscale/error.hpp"

namespace romscale {

double kinetic_energy(const VelocityField& field) { return 0.5 * inner_product(field, field); }

double kinetic_energy(const ROMOperators& ops, const Eigen::VectorXd& a) {
  if (static_cast<std::size_t>(a.size()) != ops.r) {
    throw ShapeError("coefficient vector length does not match r = " + std::to_string(ops.r));
  }
  return 0.5 * (ops.mean_energy + 2.0 * ops.mean_mode.dot(a) + a.dot(ops.M * a));
}

double max_kinetic_energy(const SnapshotSet& set) {
  double best = 0.0;
  for (const auto& s : set.snapshots()) best = std::max(best, kinetic_energy(s));
  return best;
}

ReynoldsAccumulator::ReynoldsAccumulator(const Grid& grid, std::size_t components)
    : grid_(grid), d_(components) {
  const auto wall = grid_.wall_axis();
  rows_ = wall ? grid_.dims()[*wall] : 1;
  row_of_node_.assign(grid_.node_count(), 0);
  if (wall) {
    const std::size_t stride = grid_.stride(*wall);
    for (std::size_t n = 0; n < grid_.node_count(); ++n) row_of_node_[n] = (n / stride) % rows_;
  }
  row_count_.assign(rows_, 0.0);
  for (const std::size_t row : row_of_node_) row_count_[row] += 1.0;
  sum_u_.assign(rows_ * d_, 0.0);
  sum_uu_.assign(rows_ * d_ * d_, 0.0);
}

void ReynoldsAccumulator::add(const VelocityField& field) {
  if (!(field.grid() == grid_) || field.components() != d_) {
    throw ShapeError("field layout does not match the Reynolds-stress accumulator");
  }
  // periodic-axis averages of u_i and u_i u_j for this field, then summed over time
  std::vector<double> u(rows_ * d_, 0.0), uu(rows_ * d_ * d_, 0.0);
  for (std::size_t n = 0; n < grid_.node_count(); ++n) {
    const std::size_t row = row_of_node_[n];
    for (std::size_t i = 0; i < d_; ++i) {
      const double ui = field.component(i)[n];
      u[row * d_ + i] += ui;
      for (std::size_t j = 0; j < d_; ++j) {
        uu[(row * d_ + i) * d_ + j] += ui * field.component(j)[n];
      }
    }
  }
  for (std::size_t row = 0; row < rows_; ++row) {
    for (std::size_t i = 0; i < d_; ++i) {
      sum_u_[row * d_ + i] += u[row * d_ + i] / row_count_[row];
      for (std::size_t j = 0; j < d_; ++j) {
        sum_uu_[(row * d_ + i) * d_ + j] += uu[(row * d_ + i) * d_ + j] / row_count_[row];
      }
    }
  }
  ++count_;
}

ReynoldsStress ReynoldsAccumulator::finish() const {
  if (count_ < 2) throw ValidationError("Reynolds stress needs at least two fields");
  const auto d = static_cast<Eigen::Index>(d_);
  const double inv = 1.0 / static_cast<double>(count_);
  const auto wall = grid_.wall_axis();

  ReynoldsStress rs;
  rs.tensor = Eigen::MatrixXd::Zero(d, d);
  std::vector<double> w(rows_, 1.0);
  if (wall && rows_ > 1) {
    w.front() = 0.5;
    w.back() = 0.5;
  }
  double wsum = 0.0;
  for (double x : w) wsum += x;

  for (std::size_t row = 0; row < rows_; ++row) {
    Eigen::MatrixXd R(d, d);
    for (std::size_t i = 0; i < d_; ++i) {
      const double mi = sum_u_[row * d_ + i] * inv;
      for (std::size_t j = 0; j < d_; ++j) {
        const double mj = sum_u_[row * d_ + j] * inv;
        R(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            sum_uu_[(row * d_ + i) * d_ + j] * inv - mi * mj;
      }
    }
    R = 0.5 * (R + R.transpose()).eval();
    rs.tensor += (w[row] / wsum) * R;
    rs.profile.push_back(std::move(R));
    rs.U_mean_profile.push_back(sum_u_[row * d_] * inv);
    rs.y.push_back(wall ? grid_.coordinate(*wall, row) : 0.0);
  }
  return rs;
}

ReynoldsStress reynolds_stress(const SnapshotSet& set) {
  ReynoldsAccumulator acc(set.grid(), set.components());
  for (const auto& s : set.snapshots()) acc.add(s);
  return acc.finish();
}

double u_rms(const Eigen::MatrixXd& R, double u_tau) {
  if (R.rows() != 3 || R.cols() != 3) throw ShapeError("U_RMS needs a 3x3 Reynolds stress tensor");
  if (!(u_tau > 0.0)) throw DomainError("U_RMS needs a positive friction velocity");
  return std::sqrt(std::abs(R(0, 0) - R.trace() / 3.0)) / u_tau;
}

double r12(const Eigen::MatrixXd& R, double u_tau) {
  if (R.rows() < 2 || R.cols() < 2) throw ShapeError("R12 needs at least two velocity components");
  if (!(u_tau > 0.0)) throw DomainError("R12 needs a positive friction velocity");
  return R(0, 1) / (u_tau * u_tau);
}

double friction_velocity(double U_mean_at_ymin, double nu, double y_min) {
  if (!(y_min > 0.0)) throw DomainError("friction velocity needs y_min > 0");
  if (!(nu > 0.0)) throw DomainError("friction velocity needs nu > 0");
  if (U_mean_at_ymin < 0.0) {
    throw DomainError("reversed flow: mean streamwise velocity at y_min is negative");
  }
  return std::sqrt(nu * U_mean_at_ymin / y_min);
}

double friction_velocity(const ReynoldsStress& rs, double nu) {
  if (rs.y.size() < 2) throw ShapeError("friction velocity needs a wall-normal profile");
  return friction_velocity(rs.U_mean_profile[1], nu, rs.y[1] - rs.y[0]);
}

StatsReport make_report(std::vector<double> ke_series, ReynoldsStress rs, double nu) {
  StatsReport rep;
  rep.ke_series = std::move(ke_series);
  if (rs.y.size() >= 2) {
    const double ut = friction_velocity(rs, nu);
    rep.u_tau = ut;
    if (ut > 0.0) {
      if (rs.tensor.rows() == 3) rep.U_rms = u_rms(rs.tensor, ut);
      if (rs.tensor.rows() >= 2) rep.R12 = r12(rs.tensor, ut);
    }
  }
  rep.reynolds = std::move(rs);
  return rep;
}

}  // namespace romscale
