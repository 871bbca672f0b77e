#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "romscale/rom_operators.hpp"

namespace romscale {

enum class Variant { G, ML, EFR };
Variant parse_variant(const std::string& name);  // "g", "ml", "efr"
const char* variant_name(Variant v);

/// Which lengthscale a closure parameter was built with; bookkeeping only.
enum class DeltaKind { delta1, delta2, explicit_value };

struct MLConfig {
  double alpha = 0.0;
  double U_ML = 1.0;
  double delta = 1.0;
  DeltaKind which_delta = DeltaKind::explicit_value;

  void validate() const;
};

struct EFRConfig {
  double gamma = 0.0;
  double delta = 1.0;
  double chi = 6e-3;
  DeltaKind which_delta = DeltaKind::explicit_value;

  void validate() const;
  /// The chi ~ dt preset: chi = dt.
  static EFRConfig dt_scaled(double gamma, double delta, double dt);
};

/// Time and space average of |U_1| (the streamwise component) of the
/// centering trajectory, weighted by the quadrature.
double default_ml_velocity(const VelocityField& mean);

struct ROMTrajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> coefficients;
  std::vector<double> ke;
  bool blew_up = false;
  std::optional<double> blowup_time;
  std::string failure;  // reason when blew_up

  double mean_ke() const;
};

/// One linearized BDF2 step: solves
///   [3/(2dt) I - A - extra - N(a*)] a+ = (4 a^n - a^(n-1)) / (2dt) + b
/// with a* = 2 a^n - a^(n-1) and N(a*)_in = sum_m B_imn a*_m. `b` defaults
/// to ops.b. Throws NumericalError when the system is singular or the
/// result is not finite.
Eigen::VectorXd step_bdf2(const ROMOperators& ops, const Eigen::VectorXd& a_prev,
                          const Eigen::VectorXd& a_curr, double dt, const Eigen::MatrixXd& extra,
                          const Eigen::VectorXd* b = nullptr);

/// -(alpha U_ML delta) S
Eigen::MatrixXd ml_matrix(const MLConfig& cfg, const Eigen::MatrixXd& S);

/// Cholesky factorization of M + gamma delta^2 S, reusable across steps.
class EFRFilter {
 public:
  EFRFilter(const EFRConfig& cfg, const Eigen::MatrixXd& M, const Eigen::MatrixXd& S);
  Eigen::VectorXd apply(const Eigen::VectorXd& w) const;

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

Eigen::VectorXd efr_filter(const EFRConfig& cfg, const Eigen::MatrixXd& M,
                           const Eigen::MatrixXd& S, const Eigen::VectorXd& w);
/// (1 - chi) w + chi w_bar; returns w itself for chi = 0 and w_bar for chi = 1.
Eigen::VectorXd efr_relax(double chi, const Eigen::VectorXd& w, const Eigen::VectorXd& w_bar);

struct RunConfig {
  Variant variant = Variant::G;
  MLConfig ml;
  EFRConfig efr;
  double t0 = 0.0;  // time of a0; a1 sits at t0 + dt
  double dt = 0.0;
  std::size_t n_steps = 0;
  /// Blow-up when KE > ke_blowup_factor * max_snapshot_ke, or non-finite.
  double max_snapshot_ke = 0.0;
  double ke_blowup_factor = 10.0;
};

/// Advances n_steps beyond a1. Step and filter failures end the run with
/// blew_up set instead of throwing.
ROMTrajectory run(const ROMOperators& ops, const RunConfig& cfg, const Eigen::VectorXd& a0,
                  const Eigen::VectorXd& a1);

}  // namespace romscale
