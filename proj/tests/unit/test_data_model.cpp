#include <doctest.h>

#include <fstream>

#include "helpers.hpp"
#include "romscale/error.hpp"
#include "romscale/key_value.hpp"
#include "romscale/snapshot_io.hpp"

using namespace romscale;
using namespace testing;

TEST_CASE("inner product of constants is the domain measure") {
  const Grid g = periodic_1d(16);
  const VelocityField one = sample_1d(g, [](double) { return 1.0; });
  CHECK(inner_product(one, one) == doctest::Approx(1.0).epsilon(1e-15));
  const VelocityField zero(g, 1);
  CHECK(inner_product(zero, one) == 0.0);
}

TEST_CASE("inner product of sqrt(2) sin with itself is one") {
  const Grid g = periodic_1d(256);
  const VelocityField u = sample_1d(g, [](double x) { return std::sqrt(2.0) * std::sin(two_pi * x); });
  CHECK(std::abs(inner_product(u, u) - 1.0) <= 1e-6);
}

TEST_CASE("wall-axis trapezoid weights integrate a linear ramp exactly") {
  const Grid g({11}, {0.1}, {AxisKind::wall});
  VelocityField u(g, 1), one(g, 1);
  for (std::size_t i = 0; i < 11; ++i) {
    u.component(0)[i] = g.coordinate(0, i);
    one.component(0)[i] = 1.0;
  }
  CHECK(inner_product(u, one) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("gradient of a constant vanishes") {
  const Grid g({6, 5}, {0.2, 0.25}, {AxisKind::periodic, AxisKind::wall});
  VelocityField u(g, 2);
  for (double& v : u.values()) v = 3.5;
  const FieldGradient du = gradient(u);
  for (double v : du.values()) CHECK(v == 0.0);
}

TEST_CASE("gradient of a linear ramp on a wall axis is exact") {
  const Grid g({12}, {0.1}, {AxisKind::wall});
  VelocityField u(g, 1);
  for (std::size_t i = 0; i < 12; ++i) u.component(0)[i] = g.coordinate(0, i);
  const FieldGradient du = gradient(u);
  for (double v : du.at(0, 0)) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("periodic central differences are second order") {
  const Grid g = periodic_1d(128);
  const VelocityField u = sample_1d(g, [](double x) { return std::sin(two_pi * x); });
  const FieldGradient du = gradient(u);
  double err = 0.0;
  for (std::size_t i = 0; i < 128; ++i) {
    err = std::max(err, std::abs(du.at(0, 0)[i] - two_pi * std::cos(two_pi * g.coordinate(0, i))));
  }
  CHECK(err <= 3e-3);
  CHECK(err >= 1e-4);  // not accidentally spectral
}

TEST_CASE("snapshot containers round-trip bit-exactly") {
  TempDir dir("io");
  const Grid g({4, 3}, {0.5, 0.25}, {AxisKind::periodic, AxisKind::wall});
  std::mt19937_64 gen(3);
  std::normal_distribution<double> nd;
  std::vector<VelocityField> snaps;
  for (int k = 0; k < 3; ++k) {
    VelocityField u(g, 2);
    for (double& v : u.values()) v = nd(gen);
    snaps.push_back(u);
  }
  const SnapshotSet set(g, {0.0, 0.1, 0.3}, snaps);
  write_snapshots(set, dir.path());
  const SnapshotSet back = read_snapshots(dir.path());
  REQUIRE(back.size() == 3);
  CHECK(back.grid() == g);
  CHECK(back.times() == set.times());
  for (std::size_t k = 0; k < 3; ++k) {
    const auto a = set[k].values(), b = back[k].values();
    CHECK(std::equal(a.begin(), a.end(), b.begin(), b.end()));
  }
}

TEST_CASE("payload shorter than the header is a size mismatch") {
  TempDir dir("short");
  const Grid g = periodic_1d(10);
  const SnapshotSet set(g, {0.0, 1.0}, {VelocityField(g, 1), VelocityField(g, 1)});
  write_snapshots(set, dir.path());
  const std::vector<double> nine(9, 0.0);
  write_f64(snapshot_file(dir.path(), 1), nine);
  CHECK_THROWS_WITH_AS(read_snapshots(dir.path()), doctest::Contains("size mismatch"), ValidationError);
}

TEST_CASE("non-increasing times are rejected") {
  const Grid g = periodic_1d(4);
  CHECK_THROWS_AS(SnapshotSet(g, {0.0, 0.0}, {VelocityField(g, 1), VelocityField(g, 1)}),
                  ValidationError);
}

TEST_CASE("reading a missing container names the path") {
  CHECK_THROWS_WITH_AS(read_snapshots("/nonexistent/romscale_dir"),
                       doctest::Contains("/nonexistent/romscale_dir"), ValidationError);
}

TEST_CASE("key-value configs reject unknown keys") {
  const KeyValueConfig kv = KeyValueConfig::parse("# comment\nnx = 8\nlength=2.5\n");
  CHECK(kv.get_int("nx", 0) == 8);
  CHECK(kv.get_double("length", 0.0) == 2.5);
  CHECK(kv.get_double("absent", 7.0) == 7.0);
  CHECK_THROWS_AS(kv.require_known({"nx"}), ConfigError);
}
