#include "romscale/rom_integrators.hpp"

#include <cmath>
#include <string>

#include "romscale/error.hpp"
#include "romscale/stats.hpp"

namespace romscale {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

Variant parse_variant(const std::string& name) {
  if (name == "g") return Variant::G;
  if (name == "ml") return Variant::ML;
  if (name == "efr") return Variant::EFR;
  throw ValidationError("unknown ROM variant '" + name + "' (expected g, ml or efr)");
}

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::G:
      return "g";
    case Variant::ML:
      return "ml";
    case Variant::EFR:
      return "efr";
  }
  return "?";
}

void MLConfig::validate() const {
  if (!std::isfinite(alpha) || alpha < 0.0) throw ValidationError("ML alpha must be finite and >= 0");
  if (!std::isfinite(U_ML) || !(U_ML > 0.0)) throw ValidationError("ML velocity U_ML must be > 0");
  if (!std::isfinite(delta) || !(delta > 0.0)) throw ValidationError("ML lengthscale must be > 0");
}

void EFRConfig::validate() const {
  if (!std::isfinite(gamma) || gamma < 0.0) throw ValidationError("EFR gamma must be finite and >= 0");
  if (!std::isfinite(delta) || !(delta > 0.0)) throw ValidationError("EFR filter radius must be > 0");
  if (!(chi >= 0.0 && chi <= 1.0)) {
    throw ValidationError("EFR relaxation chi must lie in [0, 1], got " + std::to_string(chi));
  }
}

EFRConfig EFRConfig::dt_scaled(double gamma, double delta, double dt) {
  EFRConfig c;
  c.gamma = gamma;
  c.delta = delta;
  c.chi = dt;
  c.validate();
  return c;
}

double default_ml_velocity(const VelocityField& mean) {
  const auto w = mean.grid().weights();
  const auto u = mean.component(0);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * std::abs(u[i]);
  return s / mean.grid().measure();
}

double ROMTrajectory::mean_ke() const {
  if (ke.empty()) return 0.0;
  double s = 0.0;
  for (double e : ke) s += e;
  return s / static_cast<double>(ke.size());
}

Vec step_bdf2(const ROMOperators& ops, const Vec& a_prev, const Vec& a_curr, double dt,
              const Mat& extra, const Vec* b) {
  const auto r = static_cast<Eigen::Index>(ops.r);
  if (!(dt > 0.0)) throw ValidationError("time step must be positive");
  if (a_prev.size() != r || a_curr.size() != r || extra.rows() != r || extra.cols() != r) {
    throw ShapeError("BDF2 step: vector or matrix size does not match r = " +
                     std::to_string(ops.r));
  }
  const Vec a_star = 2.0 * a_curr - a_prev;
  Mat system = (1.5 / dt) * Mat::Identity(r, r) - ops.A - extra - ops.frozen_first_slot(a_star);
  const Vec rhs = (4.0 * a_curr - a_prev) / (2.0 * dt) + (b != nullptr ? *b : ops.b);

  Eigen::PartialPivLU<Mat> lu(system);
  const double rc = lu.rcond();
  if (!(rc > 1e-14)) {
    throw NumericalError("BDF2 system is singular (rcond = " + std::to_string(rc) + ")");
  }
  Vec next = lu.solve(rhs);
  if (!next.allFinite()) throw NumericalError("BDF2 step produced non-finite coefficients");
  return next;
}

Mat ml_matrix(const MLConfig& cfg, const Mat& S) {
  cfg.validate();
  return -(cfg.alpha * cfg.U_ML * cfg.delta) * S;
}

EFRFilter::EFRFilter(const EFRConfig& cfg, const Mat& M, const Mat& S) {
  cfg.validate();
  if (M.rows() != M.cols() || S.rows() != S.cols() || M.rows() != S.rows()) {
    throw ShapeError("EFR filter: M and S must be square and of equal size");
  }
  llt_.compute(M + (cfg.gamma * cfg.delta * cfg.delta) * S);
  if (llt_.info() != Eigen::Success) {
    throw NumericalError("EFR filter matrix M + gamma delta^2 S is not positive definite");
  }
}

Vec EFRFilter::apply(const Vec& w) const {
  Vec out = llt_.solve(w);
  if (!out.allFinite()) throw NumericalError("EFR filter produced non-finite coefficients");
  return out;
}

Vec efr_filter(const EFRConfig& cfg, const Mat& M, const Mat& S, const Vec& w) {
  if (w.size() != M.rows()) throw ShapeError("EFR filter: vector size does not match M");
  return EFRFilter(cfg, M, S).apply(w);
}

Vec efr_relax(double chi, const Vec& w, const Vec& w_bar) {
  if (!(chi >= 0.0 && chi <= 1.0)) {
    throw ValidationError("EFR relaxation chi must lie in [0, 1], got " + std::to_string(chi));
  }
  if (w.size() != w_bar.size()) throw ShapeError("EFR relax: vector sizes differ");
  if (chi == 0.0) return w;
  if (chi == 1.0) return w_bar;
  return (1.0 - chi) * w + chi * w_bar;
}

ROMTrajectory run(const ROMOperators& ops, const RunConfig& cfg, const Vec& a0, const Vec& a1) {
  const auto r = static_cast<Eigen::Index>(ops.r);
  if (a0.size() != r || a1.size() != r) {
    throw ShapeError("initial coefficient vectors must have length r = " + std::to_string(ops.r));
  }
  if (!(cfg.dt > 0.0)) throw ValidationError("time step must be positive");
  if (!(cfg.max_snapshot_ke > 0.0) || !(cfg.ke_blowup_factor > 0.0)) {
    throw ValidationError("blow-up bound needs a positive snapshot KE and factor");
  }
  const double ke_bound = cfg.ke_blowup_factor * cfg.max_snapshot_ke;

  Mat extra = Mat::Zero(r, r);
  std::optional<EFRFilter> filter;
  if (cfg.variant == Variant::ML) extra = ml_matrix(cfg.ml, ops.S);

  ROMTrajectory traj;
  if (cfg.variant == Variant::EFR) {
    try {
      filter.emplace(cfg.efr, ops.M, ops.S);
    } catch (const NumericalError& e) {
      traj.blew_up = true;
      traj.blowup_time = cfg.t0;
      traj.failure = e.what();
      return traj;
    }
  }
  traj.times.reserve(cfg.n_steps + 2);
  traj.coefficients.reserve(cfg.n_steps + 2);
  traj.ke.reserve(cfg.n_steps + 2);
  auto record = [&](double t, const Vec& a) {
    traj.times.push_back(t);
    traj.coefficients.push_back(a);
    traj.ke.push_back(kinetic_energy(ops, a));
  };
  record(cfg.t0, a0);
  record(cfg.t0 + cfg.dt, a1);

  Vec prev = a0;
  Vec curr = a1;
  for (std::size_t n = 1; n <= cfg.n_steps; ++n) {
    const double t = cfg.t0 + static_cast<double>(n + 1) * cfg.dt;
    Vec next;
    try {
      const Vec b = ops.forcing_at(t);
      next = step_bdf2(ops, prev, curr, cfg.dt, extra, &b);
      if (filter && cfg.efr.chi != 0.0) next = efr_relax(cfg.efr.chi, next, filter->apply(next));
    } catch (const NumericalError& e) {
      traj.blew_up = true;
      traj.blowup_time = t;
      traj.failure = e.what();
      break;
    }
    const double ke = kinetic_energy(ops, next);
    if (!std::isfinite(ke) || ke > ke_bound) {
      traj.blew_up = true;
      traj.blowup_time = t;
      traj.failure = std::isfinite(ke) ? "kinetic energy exceeded the blow-up bound"
                                       : "kinetic energy is not finite";
      break;
    }
    traj.times.push_back(t);
    traj.coefficients.push_back(next);
    traj.ke.push_back(ke);
    prev = std::move(curr);
    curr = std::move(next);
  }
  return traj;
}

}  // namespace romscale
