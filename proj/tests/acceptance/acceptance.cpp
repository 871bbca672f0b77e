// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "romscale/calibrate.hpp"
#include "romscale/experiment.hpp"
#include "romscale/lengthscale.hpp"
#include "romscale/rom_integrators.hpp"
#include "romscale/stats.hpp"
#include "romscale/testbed.hpp"

using namespace romscale;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, double budget_s, const std::function<Outcome()>& body, double extra_s = 0.0) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(Clock::now() - t0).count() + extra_s;
  const bool ok = o.pass && dt < budget_s;
  if (!ok) ++failures;
  std::printf("criterion %2d: %s  %s  [%.3g s, budget %.3g s]\n", id, ok ? "PASS" : "FAIL", o.detail.c_str(), dt,
              budget_s);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

}  // namespace

int main() {
  // shared Burgers testbed at default settings
  const auto setup_start = Clock::now();
  const BurgersExperiment ex(BurgersConfig{}, 50);
  const double setup_s = seconds_since(setup_start);
  const PODBasis& basis = ex.basis();
  const std::size_t R = basis.size();
  std::printf("setup: Burgers testbed %zu nodes, %zu snapshots, R = %zu, h = %.4g, L = %.4g  [%.3g s]\n",
              ex.snapshots().grid().node_count(), ex.snapshots().size(), R, ex.h(), ex.L(), setup_s);

  report(1, 1e-3, [] {
    const double h = 0.11, L = 2.0;
    const double lam = invert_delta2(0.432, h, L);
    const double back = delta2(lam, h, L);
    return Outcome{std::abs(lam - 0.7483) <= 1e-3 && std::abs(back - 0.432) <= 5e-3,
                   fmt("Lambda = %.6f, delta2(Lambda) = %.6f", lam, back)};
  });

  report(2, 1.0, [&] {
    const double h = ex.h(), L = ex.L();
    bool ok = delta2(1.0, h, L) == h && std::abs(delta2(1e-16, h, L) - L) <= 1e-12 && delta2(0.0, h, L) == L;
    double prev = std::numeric_limits<double>::infinity();
    std::size_t violations = 0;
    for (std::size_t r = 1; r <= R; ++r) {
      const double d = ex.delta2(r);
      if (d > prev) ++violations;
      prev = d;
    }
    ok = ok && violations == 0 && ex.delta2(R) == h;
    return Outcome{ok, fmt("limits exact, %g monotonicity violations over r = 1..%g", double(violations), double(R))};
  });

  report(3, 30.0, [&] {
    double worst = 0.0;
    for (std::size_t r : {4, 8, 16}) {
      double num = 0.0, den = 0.0;
      for (std::size_t j = r; j < R; ++j) {
        const FieldGradient g = gradient(basis.mode(j));
        num += basis.eigenvalues()[j];
        den += basis.eigenvalues()[j] * gradient_inner_product(g, g);
      }
      const double oracle = std::sqrt(num / den);
      worst = std::max(worst, std::abs(ex.delta1(r) - oracle) / oracle);
    }
    const bool sized = ex.snapshots().grid().node_count() == 512 && ex.snapshots().size() >= 200;
    return Outcome{sized && worst <= 1e-3, fmt("max relative deviation from spectral oracle %.3g", worst)};
  }, setup_s);

  report(4, 60.0, [&] {
    const std::vector<std::size_t> rs{4, 8, 16, 32, 40, 50};
    bool above = true, decreasing = true;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, prev = std::numeric_limits<double>::infinity();
    std::string rows;
    for (std::size_t r : rs) {
      const double d1 = ex.delta1(r), d2 = ex.delta2(r);
      above = above && d2 > d1;
      decreasing = decreasing && d2 < prev;
      prev = d2;
      lo = std::min(lo, d1);
      hi = std::max(hi, d1);
      rows += " r" + std::to_string(r) + ":" + fmt("%.3g/%.3g", d1, d2);
    }
    const double spread = (hi - lo) / lo;
    return Outcome{above && decreasing && spread < 0.2,
                   fmt("delta1 spread %.3f;", spread) + " delta1/delta2" + rows};
  });

  report(5, 10.0, [&] {
    const std::size_t r = 8;
    CalibrationCase c = ex.make_case(r, DeltaKind::delta2);
    c.ops.M = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
    RunConfig g;
    g.t0 = ex.snapshots().times()[0];
    g.dt = ex.dt();
    g.n_steps = 600;
    g.max_snapshot_ke = ex.max_snapshot_ke();
    g.ke_blowup_factor = 1e300;  // compare full trajectories
    const ROMTrajectory ref = run(c.ops, g, c.a0, c.a1);

    auto max_diff = [&](const ROMTrajectory& t) {
      if (t.coefficients.size() != ref.coefficients.size()) return std::numeric_limits<double>::infinity();
      double d = 0.0;
      for (std::size_t k = 0; k < t.coefficients.size(); ++k) {
        d = std::max(d, (t.coefficients[k] - ref.coefficients[k]).cwiseAbs().maxCoeff());
      }
      return d;
    };
    RunConfig ml = g;
    ml.variant = Variant::ML;
    ml.ml = {0.0, ex.U_ML(), c.delta, DeltaKind::delta2};
    RunConfig efr_chi0 = g;
    efr_chi0.variant = Variant::EFR;
    efr_chi0.efr = {1.0, c.delta, 0.0, DeltaKind::delta2};
    RunConfig efr_gamma0 = g;
    efr_gamma0.variant = Variant::EFR;
    efr_gamma0.efr = {0.0, c.delta, 1.0, DeltaKind::delta2};
    const double d_ml = max_diff(run(c.ops, ml, c.a0, c.a1));
    const double d_chi = max_diff(run(c.ops, efr_chi0, c.a0, c.a1));
    const double d_gamma = max_diff(run(c.ops, efr_gamma0, c.a0, c.a1));
    const bool long_enough = ref.coefficients.size() >= 502 && !ref.blew_up;
    return Outcome{long_enough && d_ml == 0.0 && d_chi == 0.0 && d_gamma <= 1e-12,
                   fmt("max |diff| ML(a=0) %.3g, EFR(chi=0) %.3g, EFR(gamma=0) %.3g", d_ml, d_chi, d_gamma) +
                       ", steps " + std::to_string(ref.coefficients.size() - 2)};
  });

  report(6, 1.0, [] {
    ROMOperators ops;
    ops.r = 1;
    ops.b = Eigen::VectorXd::Zero(1);
    ops.A = -Eigen::MatrixXd::Identity(1, 1);
    ops.B = {0.0};
    ops.S = ops.M = Eigen::MatrixXd::Identity(1, 1);
    ops.mean_mode = Eigen::VectorXd::Zero(1);
    std::vector<double> err;
    for (double dt : {0.1, 0.05, 0.025}) {
      RunConfig cfg;
      cfg.dt = dt;
      cfg.n_steps = static_cast<std::size_t>(std::llround(1.0 / dt)) - 1;
      cfg.max_snapshot_ke = 1.0;
      const ROMTrajectory t = run(ops, cfg, Eigen::VectorXd::Ones(1), Eigen::VectorXd::Constant(1, std::exp(-dt)));
      err.push_back(std::abs(t.coefficients.back()[0] - std::exp(-1.0)));
    }
    const double p1 = std::log2(err[0] / err[1]), p2 = std::log2(err[1] / err[2]);
    return Outcome{p1 >= 1.8 && p1 <= 2.2 && p2 >= 1.8 && p2 <= 2.2, fmt("orders %.4f, %.4f", p1, p2)};
  });

  report(7, 600.0, [&] {
    const std::vector<std::size_t> rs{4, 8, 16};
    const CalibrationSetup setup = ex.setup(2000);
    std::vector<CalibrationCase> c1, c2;
    for (std::size_t r : rs) {
      c1.push_back(ex.make_case(r, DeltaKind::delta1));
      c2.push_back(ex.make_case(r, DeltaKind::delta2));
    }
    auto thresholds = [&](Variant v, DeltaKind kind, double hi, double tol) {
      SweepSpec s;
      s.r_values = rs;
      s.variant = v;
      s.which_delta = kind;
      s.param_lo = 0.0;
      s.param_hi = hi;
      s.tol_param = tol;
      s.U_ML = ex.U_ML();
      s.chi = 1.0;
      return find_threshold(s, kind == DeltaKind::delta1 ? c1 : c2, setup);
    };
    const auto a1 = thresholds(Variant::ML, DeltaKind::delta1, 100.0, 1e-4);
    const auto a2 = thresholds(Variant::ML, DeltaKind::delta2, 100.0, 1e-4);
    const auto g1 = thresholds(Variant::EFR, DeltaKind::delta1, 10.0, 1e-7);
    const auto g2 = thresholds(Variant::EFR, DeltaKind::delta2, 10.0, 1e-7);
    bool ok = true;
    std::string rows;
    for (std::size_t k = 0; k < rs.size(); ++k) {
      ok = ok && a2[k].value < a1[k].value && g2[k].value < g1[k].value;
      rows += " r" + std::to_string(rs[k]) +
              fmt(": alpha0 %.3g/%.3g gamma0 %.3g/", a1[k].value, a2[k].value, g1[k].value) +
              fmt("%.3g;", g2[k].value);
    }
    return Outcome{ok, "(delta1/delta2)" + rows};
  });

  report(8, 1.0, [] {
    const SearchResult b = bisect_threshold([](double p) { return p > 0.3; }, 0.0, 1.0, 1e-3);
    const SearchResult g = golden_section([](double p) { return std::abs(p - 0.42); }, 0.0, 1.0, 1e-3);
    return Outcome{std::abs(b.value - 0.3) <= 1e-3 && std::abs(g.value - 0.42) <= 1e-3,
                   fmt("threshold %.6f, minimizer %.6f", b.value, g.value)};
  });

  report(9, 5.0, [] {
    const ReynoldsStress rs = reynolds_stress(generate_synthetic_channel(SyntheticChannelConfig{}));
    const double asym = (rs.tensor - rs.tensor.transpose()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rs.tensor);
    double min_profile_eig = std::numeric_limits<double>::infinity();
    for (const auto& P : rs.profile) {
      min_profile_eig = std::min(min_profile_eig, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(P).eigenvalues().minCoeff());
    }
    const double iso = u_rms(Eigen::Vector3d(0.25, 0.25, 0.25).asDiagonal(), 1.3);
    const double ut = friction_velocity(1.0, 0.01, 0.04);
    const bool ok = asym <= 1e-12 && es.eigenvalues().minCoeff() >= -1e-8 && min_profile_eig >= -1e-8 &&
                    iso == 0.0 && std::abs(ut - 0.5) <= 1e-15;
    return Outcome{ok, fmt("asymmetry %.2g, min eigenvalue %.3g, u_tau %.6g", asym, es.eigenvalues().minCoeff(), ut) + fmt(", isotropic U_RMS %.3g", iso)};
  });

  report(10, 30.0, [&] {
    const std::size_t n = R;
    double ortho = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        ortho = std::max(ortho, std::abs(inner_product(basis.mode(i), basis.mode(j)) - (i == j ? 1.0 : 0.0)));
      }
    }
    const auto& a = ex.coefficients();
    const double M = static_cast<double>(a.size());
    const double lambda1 = basis.eigenvalues()[0];
    double cov = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t l = j; l < n; ++l) {
        double s = 0.0;
        for (const auto& row : a) s += row[j] * row[l];
        cov = std::max(cov, std::abs(s / M - (j == l ? basis.eigenvalues()[j] : 0.0)) / lambda1);
      }
    }
    double energy = 0.0, lambda_sum = 0.0;
    for (const auto& s : ex.snapshots().snapshots()) {
      const VelocityField u = s - basis.mean_field();
      energy += inner_product(u, u);
    }
    energy /= M;
    for (double l : basis.eigenvalues()) lambda_sum += l;
    const double ident = std::abs(lambda_sum - energy) / energy;
    return Outcome{ortho <= 1e-8 && cov <= 1e-6 && ident <= 1e-8,
                   fmt("orthonormality %.3g, covariance %.3g, energy identity %.3g", ortho, cov, ident)};
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
