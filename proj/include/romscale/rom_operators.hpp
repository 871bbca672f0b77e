#pragma once

#include <filesystem>
#include <vector>

#include <Eigen/Dense>

#include "romscale/field.hpp"
#include "romscale/forcing.hpp"
#include "romscale/pod.hpp"

namespace romscale {

/// Galerkin operators of  da/dt = b + A a + q(a),  q_i = sum_{m,n} B_imn a_m a_n.
///
///   b_i   =  <phi_i, f> - <phi_i, U.grad U> - re_inv <grad phi_i, grad U>
///   A_im  = -<phi_i, U.grad phi_m> - <phi_i, phi_m.grad U> - re_inv S_im
///   B_imn = -<phi_i, phi_m.grad phi_n>
///
/// B is dense, stored row-major as B[(i*r + m)*r + n].
///
/// A time-dependent separable forcing sum_p cos(omega_p t + phase_p) F_p is
/// carried as G_ip = <phi_i, F_p>; the constant vector b then excludes the
/// forcing and b(t) = b + G theta(t).
struct ROMOperators {
  std::size_t r = 0;
  Eigen::VectorXd b;
  Eigen::MatrixXd A;
  std::vector<double> B;
  Eigen::MatrixXd S;
  Eigen::MatrixXd M;
  double re_inv = 0.0;

  // cached for the coefficient-space kinetic energy
  double mean_energy = 0.0;   // <U, U>
  Eigen::VectorXd mean_mode;  // <U, phi_j>

  Eigen::MatrixXd G;  // r x P, empty without separable forcing
  std::vector<double> omega;
  std::vector<double> phase;

  double B_at(std::size_t i, std::size_t m, std::size_t n) const { return B[(i * r + m) * r + n]; }
  bool time_dependent() const { return G.cols() > 0; }

  /// b(t); equals b when no separable forcing is attached.
  Eigen::VectorXd forcing_at(double t) const;
  /// q_i(a) = sum_{m,n} B_imn a_m a_n
  Eigen::VectorXd quadratic(const Eigen::VectorXd& a) const;
  /// N_in = sum_m B_imn a_m (first slot frozen at a)
  Eigen::MatrixXd frozen_first_slot(const Eigen::VectorXd& a) const;
};

/// Requires 1 <= r <= R and, for advection, one velocity component per axis.
ROMOperators assemble(const PODBasis& basis, std::size_t r, double re_inv,
                      const VelocityField& forcing);
ROMOperators assemble(const PODBasis& basis, std::size_t r, double re_inv,
                      const SeparableForcing& forcing);

/// Operators of the first r modes: the leading blocks of every array.
ROMOperators truncate(const ROMOperators& ops, std::size_t r);

/// b + A a + q(a), with the constant b.
Eigen::VectorXd rhs(const ROMOperators& ops, const Eigen::VectorXd& a);
/// b(t) + A a + q(a)
Eigen::VectorXd rhs(const ROMOperators& ops, const Eigen::VectorXd& a, double t);

/// Directory with b.bin, A.bin, B.bin, S.bin, M.bin, U_phi.bin, G.bin
/// (little-endian float64, row-major) and ops_meta.json holding shapes and
/// scalars.
void write_operators(const ROMOperators& ops, const std::filesystem::path& dir);
ROMOperators read_operators(const std::filesystem::path& dir);

}  // namespace romscale
