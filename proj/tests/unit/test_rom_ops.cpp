#include <doctest.h>

#include "helpers.hpp"
#include "romscale/error.hpp"
#include "romscale/rom_operators.hpp"

using namespace romscale;
using namespace testing;

namespace {

PODBasis random_basis(std::size_t n, std::size_t R, std::uint64_t seed, bool zero_mean = false) {
  const Grid g = periodic_1d(n);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  VelocityField mean(g, 1);
  if (!zero_mean) {
    for (double& v : mean.values()) v = nd(gen);
  }
  std::vector<VelocityField> modes;
  std::vector<double> lambda;
  for (std::size_t j = 0; j < R; ++j) {
    VelocityField m(g, 1);
    for (double& v : m.values()) v = nd(gen);
    modes.push_back(m);
    lambda.push_back(static_cast<double>(R - j));
  }
  return PODBasis(mean, modes, lambda);
}

// smooth orthonormal Fourier basis on a periodic unit grid
PODBasis fourier_basis(std::size_t n, std::size_t R) {
  const Grid g = periodic_1d(n);
  const VelocityField mean = sample_1d(g, [](double x) { return 0.8 + 0.2 * std::sin(two_pi * x); });
  std::vector<VelocityField> modes;
  std::vector<double> lambda;
  for (std::size_t j = 0; j < R; ++j) {
    const int q = static_cast<int>(j / 2) + 1;
    modes.push_back(sample_1d(g, [&](double x) {
      return std::sqrt(2.0) * (j % 2 == 0 ? std::sin(two_pi * q * x) : std::cos(two_pi * q * x));
    }));
    lambda.push_back(1.0 / static_cast<double>(j + 1));
  }
  return PODBasis(mean, modes, lambda);
}

// naive node loop: central difference with periodic wrap, rectangle weights
struct Oracle {
  std::size_t n;
  double h;
  std::vector<double> d(const std::vector<double>& f) const {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = (f[(k + 1) % n] - f[(k + n - 1) % n]) / (2 * h);
    return out;
  }
  double ip(const std::vector<double>& f, const std::vector<double>& g) const {
    double s = 0;
    for (std::size_t k = 0; k < n; ++k) s += h * f[k] * g[k];
    return s;
  }
  double ip3(const std::vector<double>& f, const std::vector<double>& g, const std::vector<double>& e) const {
    double s = 0;
    for (std::size_t k = 0; k < n; ++k) s += h * f[k] * g[k] * e[k];
    return s;
  }
};

std::vector<double> vec(const VelocityField& f) { return {f.values().begin(), f.values().end()}; }

}  // namespace

TEST_CASE("operators on an 8-node grid match a node-loop oracle") {
  const PODBasis basis = random_basis(8, 2, 11);
  const double nu = 0.3;
  const Grid& g = basis.grid();
  VelocityField f(g, 1);
  for (std::size_t k = 0; k < 8; ++k) f.values()[k] = std::cos(0.7 * static_cast<double>(k));
  const ROMOperators ops = assemble(basis, 2, nu, f);

  const Oracle o{8, 1.0 / 8};
  const auto U = vec(basis.mean_field());
  const auto dU = o.d(U);
  const auto F = vec(f);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto pi = vec(basis.mode(i));
    const auto dpi = o.d(pi);
    CHECK(std::abs(ops.b[i] - (o.ip(pi, F) - o.ip3(pi, U, dU) - nu * o.ip(dpi, dU))) <= 1e-10);
    for (std::size_t m = 0; m < 2; ++m) {
      const auto pm = vec(basis.mode(m));
      const auto dpm = o.d(pm);
      const double A = -o.ip3(pi, U, dpm) - o.ip3(pi, pm, dU) - nu * o.ip(dpi, dpm);
      CHECK(std::abs(ops.A(i, m) - A) <= 1e-10);
      CHECK(std::abs(ops.S(i, m) - o.ip(dpi, dpm)) <= 1e-10);
      CHECK(std::abs(ops.M(i, m) - o.ip(pi, pm)) <= 1e-10);
      for (std::size_t n = 0; n < 2; ++n) {
        const auto dpn = o.d(vec(basis.mode(n)));
        CHECK(std::abs(ops.B_at(i, m, n) + o.ip3(pi, pm, dpn)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("zero mean and zero forcing give b = 0") {
  const PODBasis basis = random_basis(32, 4, 2, true);
  const ROMOperators ops = assemble(basis, 4, 0.1, VelocityField(basis.grid(), 1));
  CHECK(ops.b.cwiseAbs().maxCoeff() == 0.0);
  CHECK((ops.A + 0.1 * ops.S).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("the viscous part of A is -re_inv S") {
  const PODBasis basis = random_basis(32, 4, 3);
  const VelocityField f(basis.grid(), 1);
  const ROMOperators inviscid = assemble(basis, 4, 0.0, f);
  const ROMOperators viscous = assemble(basis, 4, 0.25, f);
  CHECK((viscous.A - inviscid.A + 0.25 * viscous.S).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("stiffness is symmetric PSD and the mass matrix is the identity") {
  const PODBasis basis = fourier_basis(128, 6);
  const ROMOperators ops = assemble(basis, 6, 0.01, VelocityField(basis.grid(), 1));
  CHECK((ops.S - ops.S.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ops.S);
  CHECK(es.eigenvalues().minCoeff() >= -1e-8);
  CHECK((ops.M - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("rhs basics") {
  const PODBasis basis = random_basis(16, 3, 4);
  const ROMOperators ops = assemble(basis, 3, 0.1, VelocityField(basis.grid(), 1));
  CHECK(rhs(ops, Eigen::VectorXd::Zero(3)) == ops.b);

  ROMOperators lin;
  lin.r = 1;
  lin.b = Eigen::VectorXd::Zero(1);
  lin.A = -Eigen::MatrixXd::Identity(1, 1);
  lin.B = {0.0};
  CHECK(rhs(lin, Eigen::VectorXd::Constant(1, 2.0))[0] == -2.0);
  CHECK_THROWS_AS(rhs(lin, Eigen::VectorXd::Zero(2)), ShapeError);
}

TEST_CASE("rhs Jacobian matches central finite differences") {
  const PODBasis basis = random_basis(24, 4, 5);
  const ROMOperators ops = assemble(basis, 4, 0.05, VelocityField(basis.grid(), 1));
  std::mt19937_64 gen(6);
  std::normal_distribution<double> nd;
  Eigen::VectorXd a(4);
  for (auto& v : a) v = nd(gen);
  const double eps = 1e-6;
  for (Eigen::Index k = 0; k < 4; ++k) {
    Eigen::VectorXd ap = a, am = a;
    ap[k] += eps;
    am[k] -= eps;
    const Eigen::VectorXd fd = (rhs(ops, ap) - rhs(ops, am)) / (2 * eps);
    for (Eigen::Index i = 0; i < 4; ++i) {
      double analytic = ops.A(i, k);
      for (Eigen::Index n = 0; n < 4; ++n) {
        analytic += (ops.B_at(i, k, n) + ops.B_at(i, n, k)) * a[n];
      }
      CHECK(std::abs(fd[i] - analytic) <= 1e-6 * std::max(1.0, std::abs(analytic)));
    }
  }
}

double skew_residual(std::size_t n, std::size_t R, const Eigen::VectorXd& a) {
  const PODBasis basis = fourier_basis(n, R);
  const ROMOperators ops = assemble(basis, R, 0.0, VelocityField(basis.grid(), 1));
  return std::abs(a.dot(ops.quadratic(a))) / std::pow(a.norm(), 3);
}

TEST_CASE("advection conserves energy on a single periodic wavenumber") {
  // central differences act on one sin/cos pair as a uniform rescaling of
  // the exact derivative, so the cubic term integrates to zero
  std::mt19937_64 gen(7);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd a(2);
    for (auto& v : a) v = nd(gen);
    CHECK(skew_residual(512, 2, a) <= 1e-6);
  }
}

TEST_CASE("advection energy residual is second order in the mesh size") {
  // several wavenumbers: the residual is truncation error, O(h^2)
  std::mt19937_64 gen(8);
  std::normal_distribution<double> nd;
  Eigen::VectorXd a(6);
  for (auto& v : a) v = nd(gen);
  const double coarse = skew_residual(256, 6, a), fine = skew_residual(512, 6, a);
  CHECK(coarse / fine >= 3.5);
  CHECK(coarse / fine <= 4.5);
}

TEST_CASE("truncation equals assembling fewer modes") {
  const PODBasis basis = random_basis(16, 5, 8);
  const VelocityField f = sample_1d(basis.grid(), [](double x) { return x; });
  const ROMOperators full = assemble(basis, 5, 0.1, f);
  const ROMOperators small = assemble(basis, 3, 0.1, f);
  const ROMOperators cut = truncate(full, 3);
  CHECK((cut.A - small.A).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((cut.b - small.b).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((cut.S - small.S).cwiseAbs().maxCoeff() <= 1e-14);
  for (std::size_t k = 0; k < cut.B.size(); ++k) CHECK(std::abs(cut.B[k] - small.B[k]) <= 1e-14);
  CHECK_THROWS_AS(assemble(basis, 6, 0.1, f), ValidationError);
  CHECK_THROWS_AS(assemble(basis, 0, 0.1, f), ValidationError);
}

TEST_CASE("operators round-trip through disk") {
  const PODBasis basis = random_basis(16, 3, 9);
  const VelocityField steady = sample_1d(basis.grid(), [](double x) { return std::sin(two_pi * x); });
  const SeparableForcing forcing({steady, 2.0 * steady}, {0.0, 3.0}, {0.0, 0.5});
  const ROMOperators ops = assemble(basis, 3, 0.1, forcing);
  TempDir dir("ops");
  write_operators(ops, dir.path());
  const ROMOperators back = read_operators(dir.path());
  CHECK(back.r == 3);
  CHECK(back.A == ops.A);
  CHECK(back.B == ops.B);
  CHECK(back.G == ops.G);
  CHECK(back.omega == ops.omega);
  CHECK(back.forcing_at(0.3) == ops.forcing_at(0.3));
}
