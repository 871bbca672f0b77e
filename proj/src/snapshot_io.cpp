#include "romscale/snapshot_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

#include "json.hpp"
#include "romscale/error.hpp"

namespace romscale {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    return __builtin_bswap64(v);
  }
}

const char* kind_name(AxisKind k) { return k == AxisKind::periodic ? "periodic" : "wall"; }

AxisKind parse_kind(const std::string& s) {
  if (s == "periodic") return AxisKind::periodic;
  if (s == "wall") return AxisKind::wall;
  throw ValidationError("unknown axis_kind '" + s + "'");
}

}  // namespace

fs::path snapshot_file(const fs::path& dir, std::size_t index) {
  char name[32];
  std::snprintf(name, sizeof name, "snap_%06zu.bin", index);
  return dir / name;
}

void write_f64(const fs::path& file, std::span<const double> values) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot open '" + file.string() + "' for writing");
  std::vector<std::uint64_t> buf(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    buf[i] = to_little(std::bit_cast<std::uint64_t>(values[i]));
  }
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(std::uint64_t)));
  if (!out) throw ValidationError("write failed for '" + file.string() + "'");
}

std::vector<double> read_f64(const fs::path& file) {
  std::ifstream in(file, std::ios::binary | std::ios::ate);
  if (!in) throw ValidationError("cannot open '" + file.string() + "'");
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes % sizeof(double) != 0) {
    throw ValidationError("'" + file.string() + "' is not a whole number of float64 values");
  }
  in.seekg(0);
  std::vector<std::uint64_t> buf(bytes / sizeof(double));
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(bytes));
  if (!in) throw ValidationError("read failed for '" + file.string() + "'");
  std::vector<double> out(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) out[i] = std::bit_cast<double>(to_little(buf[i]));
  return out;
}

std::vector<double> read_f64(const fs::path& file, std::size_t expected) {
  auto values = read_f64(file);
  if (values.size() != expected) {
    throw ValidationError("size mismatch in '" + file.string() + "': header declares " +
                          std::to_string(expected) + " values, payload has " +
                          std::to_string(values.size()));
  }
  return values;
}

void write_fields(const std::vector<VelocityField>& fields, const std::vector<double>& labels,
                  const fs::path& dir) {
  if (fields.empty()) throw ValidationError("refusing to write an empty field container");
  if (labels.size() != fields.size()) throw ShapeError("one label per field required");
  fs::create_directories(dir);
  const Grid& g = fields.front().grid();
  json meta;
  meta["dims"] = g.dims();
  meta["spacing"] = g.spacing();
  std::vector<std::string> kinds;
  for (auto k : g.kinds()) kinds.emplace_back(kind_name(k));
  meta["axis_kind"] = kinds;
  meta["components"] = fields.front().components();
  meta["times"] = labels;
  meta["order"] = "row-major";

  std::ofstream out(dir / "meta.json", std::ios::trunc);
  if (!out) throw ValidationError("cannot write '" + (dir / "meta.json").string() + "'");
  out << meta.dump(2) << '\n';

  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (!fields[k].same_layout(fields.front())) throw ShapeError("fields differ in layout");
    write_f64(snapshot_file(dir, k), fields[k].values());
  }
}

FieldContainer read_fields(const fs::path& dir) {
  const fs::path meta_path = dir / "meta.json";
  if (!fs::exists(meta_path)) {
    throw ValidationError("no snapshot container at '" + dir.string() + "' (missing meta.json)");
  }
  json meta;
  try {
    std::ifstream in(meta_path);
    meta = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("malformed header '" + meta_path.string() + "': " + e.what());
  }

  std::vector<std::size_t> dims;
  std::vector<double> spacing;
  std::vector<AxisKind> kinds;
  std::size_t components = 0;
  std::vector<double> times;
  try {
    dims = meta.at("dims").get<std::vector<std::size_t>>();
    spacing = meta.at("spacing").get<std::vector<double>>();
    for (const auto& k : meta.at("axis_kind")) kinds.push_back(parse_kind(k.get<std::string>()));
    components = meta.at("components").get<std::size_t>();
    times = meta.at("times").get<std::vector<double>>();
    if (meta.at("order").get<std::string>() != "row-major") {
      throw ValidationError("unsupported order '" + meta.at("order").get<std::string>() + "'");
    }
  } catch (const json::exception& e) {
    throw ValidationError("malformed header '" + meta_path.string() + "': " + e.what());
  }

  Grid grid(dims, spacing, kinds);
  const std::size_t expected = components * grid.node_count();
  std::vector<VelocityField> fields;
  fields.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    fields.emplace_back(grid, components, read_f64(snapshot_file(dir, k), expected));
  }
  return {std::move(grid), components, std::move(times), std::move(fields)};
}

void write_snapshots(const SnapshotSet& set, const fs::path& dir) {
  write_fields(set.snapshots(), set.times(), dir);
}

SnapshotSet read_snapshots(const fs::path& dir) {
  auto c = read_fields(dir);
  return SnapshotSet(std::move(c.grid), std::move(c.labels), std::move(c.fields));
}

}  // namespace romscale
