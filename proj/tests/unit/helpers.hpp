#pragma once

#include <cmath>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "romscale/field.hpp"

namespace testing {

using romscale::AxisKind;
using romscale::Grid;
using romscale::VelocityField;

inline Grid periodic_1d(std::size_t n, double length = 1.0) {
  return Grid({n}, {length / static_cast<double>(n)}, {AxisKind::periodic});
}

inline VelocityField sample_1d(const Grid& g, const std::function<double(double)>& f) {
  VelocityField u(g, 1);
  for (std::size_t i = 0; i < g.node_count(); ++i) u.component(0)[i] = f(g.coordinate(0, i));
  return u;
}

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// fresh directory under the system temp dir, removed on destruction
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("romscale_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
