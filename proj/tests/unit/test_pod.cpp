#include <doctest.h>

#include "helpers.hpp"
#include "romscale/error.hpp"
#include "romscale/pod.hpp"
#include "romscale/snapshot_io.hpp"

using namespace romscale;
using namespace testing;

namespace {

// mean U plus a few Fourier modes with random amplitudes
SnapshotSet fourier_set(std::size_t n, std::size_t m, std::uint64_t seed) {
  const Grid g = periodic_1d(n);
  const VelocityField U = sample_1d(g, [](double x) { return 1.0 + 0.3 * std::cos(two_pi * x); });
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  std::vector<double> times;
  std::vector<VelocityField> snaps;
  for (std::size_t k = 0; k < m; ++k) {
    VelocityField u = U;
    for (int q = 1; q <= 6; ++q) {
      const double a = nd(gen) / q, b = nd(gen) / q;
      u.axpy(1.0, sample_1d(g, [&](double x) { return a * std::sin(two_pi * q * x) + b * std::cos(two_pi * q * x); }));
    }
    snaps.push_back(u);
    times.push_back(static_cast<double>(k));
  }
  return SnapshotSet(g, times, snaps);
}

}  // namespace

TEST_CASE("mean of snapshots") {
  const Grid g = periodic_1d(8);
  auto constant = [&](double c) { return sample_1d(g, [c](double) { return c; }); };
  const VelocityField f = sample_1d(g, [](double x) { return std::sin(two_pi * x); });
  SUBCASE("identical snapshots") {
    const VelocityField m = compute_mean(SnapshotSet(g, {0, 1}, {f, f}));
    for (std::size_t i = 0; i < 8; ++i) CHECK(m.values()[i] == doctest::Approx(f.values()[i]));
  }
  SUBCASE("f and -f") {
    const VelocityField m = compute_mean(SnapshotSet(g, {0, 1}, {f, -1.0 * f}));
    for (double v : m.values()) CHECK(v == 0.0);
  }
  SUBCASE("constants 0, 1, 2") {
    const VelocityField m = compute_mean(SnapshotSet(g, {0, 1, 2}, {constant(0), constant(1), constant(2)}));
    for (double v : m.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("U plus and minus a unit mode gives that mode with eigenvalue one") {
  const Grid g = periodic_1d(64);
  const VelocityField U = sample_1d(g, [](double x) { return 0.5 + x * (1 - x); });
  const VelocityField phi = sample_1d(g, [](double x) { return std::sqrt(2.0) * std::sin(two_pi * 3 * x); });
  const PODBasis basis = compute_pod(SnapshotSet(g, {0, 1}, {U + phi, U - phi}));
  REQUIRE(basis.size() == 1);
  CHECK(basis.eigenvalues()[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(std::abs(inner_product(basis.mode(0), phi)) - 1.0) <= 1e-12);
}

TEST_CASE("identical snapshots give no basis") {
  const Grid g = periodic_1d(16);
  const VelocityField f = sample_1d(g, [](double x) { return std::cos(two_pi * x); });
  CHECK_THROWS_AS(compute_pod(SnapshotSet(g, {0, 1, 2}, {f, f, f})), NumericalError);
}

TEST_CASE("modes are orthonormal and project/reconstruct are consistent") {
  const SnapshotSet set = fourier_set(128, 40, 5);
  const PODBasis basis = compute_pod(set);
  REQUIRE(basis.size() == 12);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      CHECK(std::abs(inner_product(basis.mode(i), basis.mode(j)) - (i == j ? 1.0 : 0.0)) <= 1e-8);
    }
  }
  // projection of mean + 3 phi_2
  VelocityField f = basis.mean_field();
  f.axpy(3.0, basis.mode(1));
  const auto a = project(basis, f, 4);
  CHECK(std::abs(a[0]) <= 1e-12);
  CHECK(a[1] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::abs(a[2]) <= 1e-12);
  CHECK(std::abs(a[3]) <= 1e-12);

  VelocityField g = basis.mean_field();
  g.axpy(1.0, basis.mode(0));
  g.axpy(1.0, basis.mode(1));
  const auto a1 = project(basis, g, 1);
  REQUIRE(a1.size() == 1);
  CHECK(a1[0] == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(project(basis, basis.mean_field(), 3) == std::vector<double>(3, 0.0));
  const VelocityField m = reconstruct(basis, std::vector<double>(5, 0.0));
  CHECK(std::equal(m.values().begin(), m.values().end(), basis.mean_field().values().begin()));

  std::vector<double> e1(basis.size(), 0.0);
  e1[0] = 1.0;
  const VelocityField r1 = reconstruct(basis, e1);
  for (std::size_t i = 0; i < r1.values().size(); ++i) {
    CHECK(r1.values()[i] ==
          doctest::Approx(basis.mean_field().values()[i] + basis.mode(0).values()[i]).epsilon(1e-14));
  }

  // completeness on the span
  for (std::size_t k = 0; k < set.size(); k += 7) {
    const VelocityField back = reconstruct(basis, project(basis, set[k], basis.size()));
    for (std::size_t i = 0; i < back.values().size(); ++i) {
      CHECK(std::abs(back.values()[i] - set[k].values()[i]) <= 1e-8);
    }
  }
}

TEST_CASE("energy ratio") {
  CHECK(energy_ratio({4, 3, 2, 1}, 2) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(energy_ratio({4, 3, 2, 1}, 4) == 1.0);
  CHECK(energy_ratio({2, 2, 2, 2}, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(energy_ratio({0, 0}, 1), DomainError);
  CHECK_THROWS_AS(energy_ratio({1, 0}, 3), ValidationError);
}

TEST_CASE("r_max caps the basis and bases round-trip through disk") {
  const SnapshotSet set = fourier_set(64, 30, 9);
  const PODBasis basis = compute_pod(set, 5);
  CHECK(basis.size() == 5);
  TempDir dir("basis");
  write_basis(basis, dir.path());
  const PODBasis back = read_basis(dir.path());
  REQUIRE(back.size() == 5);
  CHECK(back.eigenvalues() == basis.eigenvalues());
  const auto a = back.mode(4).values(), b = basis.mode(4).values();
  CHECK(std::equal(a.begin(), a.end(), b.begin(), b.end()));
}
