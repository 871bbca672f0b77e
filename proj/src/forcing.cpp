#include "romscale/forcing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "romscale/error.hpp"
#include "romscale/snapshot_io.hpp"

namespace romscale {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path pattern_file(const fs::path& dir, std::size_t p) {
  char name[32];
  std::snprintf(name, sizeof name, "pattern_%06zu.bin", p);
  return dir / name;
}

}  // namespace

SeparableForcing::SeparableForcing(std::vector<VelocityField> patterns, std::vector<double> omega,
                                   std::vector<double> phase)
    : patterns_(std::move(patterns)), omega_(std::move(omega)), phase_(std::move(phase)) {
  if (omega_.size() != patterns_.size() || phase_.size() != patterns_.size()) {
    throw ShapeError("forcing needs one frequency and one phase per pattern");
  }
  for (std::size_t p = 1; p < patterns_.size(); ++p) {
    if (!patterns_[p].same_layout(patterns_[0])) {
      throw ShapeError("forcing patterns must share grid and component count");
    }
  }
}

std::vector<double> SeparableForcing::modulation(double t) const {
  std::vector<double> theta(size());
  for (std::size_t p = 0; p < size(); ++p) theta[p] = std::cos(omega_[p] * t + phase_[p]);
  return theta;
}

void SeparableForcing::evaluate(double t, VelocityField& out) const {
  std::fill(out.values().begin(), out.values().end(), 0.0);
  const auto theta = modulation(t);
  for (std::size_t p = 0; p < size(); ++p) out.axpy(theta[p], patterns_[p]);
}

VelocityField SeparableForcing::steady_part() const {
  if (empty()) throw ValidationError("forcing has no patterns");
  VelocityField sum(patterns_[0].grid(), patterns_[0].components());
  for (std::size_t p = 0; p < size(); ++p) {
    if (omega_[p] == 0.0) sum.axpy(std::cos(phase_[p]), patterns_[p]);
  }
  return sum;
}

void write_forcing(const SeparableForcing& forcing, const fs::path& dir) {
  const fs::path sub = dir / "forcing";
  fs::create_directories(sub);
  json meta;
  meta["omega"] = forcing.omega();
  meta["phase"] = forcing.phase();
  meta["components"] = forcing.empty() ? 0 : forcing.patterns()[0].components();
  std::ofstream out(sub / "forcing.json", std::ios::trunc);
  if (!out) throw ValidationError("cannot write '" + (sub / "forcing.json").string() + "'");
  out << meta.dump(2) << '\n';
  for (std::size_t p = 0; p < forcing.size(); ++p) {
    write_f64(pattern_file(sub, p), forcing.patterns()[p].values());
  }
}

std::optional<SeparableForcing> read_forcing(const fs::path& dir, const Grid& grid) {
  const fs::path sub = dir / "forcing";
  if (!fs::exists(sub / "forcing.json")) return std::nullopt;
  std::vector<double> omega, phase;
  std::size_t components = 0;
  try {
    std::ifstream in(sub / "forcing.json");
    const json meta = json::parse(in);
    omega = meta.at("omega").get<std::vector<double>>();
    phase = meta.at("phase").get<std::vector<double>>();
    components = meta.at("components").get<std::size_t>();
  } catch (const json::exception& e) {
    throw ValidationError("malformed header '" + (sub / "forcing.json").string() + "': " + e.what());
  }
  std::vector<VelocityField> patterns;
  for (std::size_t p = 0; p < omega.size(); ++p) {
    patterns.emplace_back(grid, components,
                          read_f64(pattern_file(sub, p), components * grid.node_count()));
  }
  return SeparableForcing(std::move(patterns), std::move(omega), std::move(phase));
}

}  // namespace romscale
