#include <doctest.h>

#include "helpers.hpp"
#include "romscale/error.hpp"
#include "romscale/pod.hpp"
#include "romscale/rom_operators.hpp"
#include "romscale/stats.hpp"
#include "romscale/testbed.hpp"

using namespace romscale;
using namespace testing;

TEST_CASE("kinetic energy of simple fields") {
  const Grid g({4, 5, 3}, {0.5, 0.25, 1.0 / 3}, {AxisKind::periodic, AxisKind::wall, AxisKind::periodic});
  CHECK(kinetic_energy(VelocityField(g, 3)) == 0.0);
  VelocityField c(g, 3);
  for (double& v : c.values()) v = 1.5;
  CHECK(kinetic_energy(c) == doctest::Approx(1.5 * 1.5 * 1.5 * g.measure()).epsilon(1e-14));
}

TEST_CASE("coefficient-space and field-space kinetic energy agree") {
  SyntheticChannelConfig c;
  c.dims = {8, 9, 6};
  c.n_snapshots = 20;
  const SnapshotSet set = generate_synthetic_channel(c);
  const PODBasis basis = compute_pod(set);
  const std::size_t r = std::min<std::size_t>(6, basis.size());
  const ROMOperators ops = assemble(basis, r, 0.01, VelocityField(set.grid(), 3));
  std::mt19937_64 gen(1);
  std::normal_distribution<double> nd;
  for (int k = 0; k < 5; ++k) {
    std::vector<double> a(r);
    for (double& v : a) v = nd(gen);
    const double field = kinetic_energy(reconstruct(basis, a));
    const double coeff = kinetic_energy(ops, Eigen::Map<const Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(r)));
    CHECK(std::abs(field - coeff) <= 1e-10 * field);
  }
  // completeness on the span
  const double e = kinetic_energy(set[3]);
  CHECK(std::abs(kinetic_energy(reconstruct(basis, project(basis, set[3], basis.size()))) - e) <= 1e-8 * e);
}

TEST_CASE("Reynolds stress of constant fields") {
  const Grid g({4, 5, 3}, {0.5, 0.25, 1.0 / 3}, {AxisKind::periodic, AxisKind::wall, AxisKind::periodic});
  VelocityField plus(g, 3), minus(g, 3);
  for (double& v : plus.component(0)) v = 1.0;
  for (double& v : minus.component(0)) v = -1.0;
  const ReynoldsStress rs = reynolds_stress(SnapshotSet(g, {0, 1}, {plus, minus}));
  CHECK(rs.tensor(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((rs.tensor.cwiseAbs().sum() - std::abs(rs.tensor(0, 0))) == 0.0);

  const ReynoldsStress still = reynolds_stress(SnapshotSet(g, {0, 1, 2}, {plus, plus, plus}));
  CHECK(still.tensor.cwiseAbs().maxCoeff() <= 1e-12);

  CHECK_THROWS_AS(reynolds_stress(SnapshotSet(g, {0}, {plus})), ValidationError);
}

TEST_CASE("Reynolds stress of the synthetic channel is a symmetric PSD covariance") {
  SyntheticChannelConfig c;
  c.dims = {16, 17, 8};
  c.n_snapshots = 24;
  const ReynoldsStress rs = reynolds_stress(generate_synthetic_channel(c));
  CHECK((rs.tensor - rs.tensor.transpose()).cwiseAbs().maxCoeff() == 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rs.tensor);
  CHECK(es.eigenvalues().minCoeff() >= -1e-8);
  CHECK(rs.y.size() == 17);
  CHECK(rs.profile.size() == 17);
}

TEST_CASE("normalized RMS streamwise velocity") {
  CHECK(u_rms(Eigen::Vector3d(2, 2, 2).asDiagonal(), 1.0) == 0.0);
  CHECK(u_rms(Eigen::Vector3d(4, 1, 1).asDiagonal(), 1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  const Eigen::Matrix3d R = Eigen::Vector3d(4, 1, 1).asDiagonal();
  CHECK(u_rms(9.0 * R, 3.0) == doctest::Approx(u_rms(R, 1.0)).epsilon(1e-15));
  CHECK_THROWS_AS(u_rms(R, 0.0), DomainError);
  CHECK_THROWS_AS(u_rms(Eigen::Matrix2d::Identity(), 1.0), ShapeError);
}

TEST_CASE("streamwise-spanwise stress") {
  Eigen::Matrix2d R = Eigen::Matrix2d::Zero();
  CHECK(r12(R, 1.0) == 0.0);
  R(0, 1) = R(1, 0) = 0.5;
  CHECK(r12(R, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
  R(0, 1) = R(1, 0) = -0.3;
  CHECK(r12(R, 0.7) < 0.0);
  CHECK_THROWS_AS(r12(R, 0.0), DomainError);
}

TEST_CASE("friction velocity") {
  CHECK(friction_velocity(1.0, 0.01, 0.04) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(friction_velocity(0.0, 0.01, 0.04) == 0.0);
  CHECK(friction_velocity(1.0, 0.04, 0.04) == doctest::Approx(2 * friction_velocity(1.0, 0.01, 0.04)).epsilon(1e-15));
  CHECK_THROWS_AS(friction_velocity(-1.0, 0.01, 0.04), DomainError);
  CHECK_THROWS_AS(friction_velocity(1.0, 0.01, 0.0), DomainError);
}

TEST_CASE("reports leave undefined quantities empty") {
  BurgersConfig b;
  b.nx = 32;
  b.dt = 1e-3;
  b.t_collect_start = 0.0;
  b.t_collect_end = 0.2;
  b.n_snapshots = 5;
  const StatsReport burgers = make_report({}, reynolds_stress(run_burgers(b).snapshots), 1e-3);
  CHECK_FALSE(burgers.u_tau.has_value());
  CHECK_FALSE(burgers.U_rms.has_value());

  SyntheticChannelConfig c;
  c.dims = {8, 9, 4};
  c.n_snapshots = 6;
  const StatsReport channel = make_report({}, reynolds_stress(generate_synthetic_channel(c)), 1e-3);
  CHECK(channel.u_tau.has_value());
  CHECK(channel.U_rms.has_value());
  CHECK(channel.R12.has_value());
}
