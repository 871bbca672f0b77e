#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "romscale/field.hpp"

namespace romscale {

/// Snapshot container layout:
///   <dir>/meta.json        dims, spacing, axis_kind, components, times, order
///   <dir>/snap_000000.bin  components back to back, row-major, little-endian f64
///
/// Writing creates the directory if needed and overwrites existing files.
void write_snapshots(const SnapshotSet& set, const std::filesystem::path& dir);
SnapshotSet read_snapshots(const std::filesystem::path& dir);

/// Same container without the SnapshotSet invariants (any count of fields,
/// labels need not increase). Used for POD bases, whose "times" are mode
/// numbers.
void write_fields(const std::vector<VelocityField>& fields, const std::vector<double>& labels,
                  const std::filesystem::path& dir);
struct FieldContainer {
  Grid grid;
  std::size_t components;
  std::vector<double> labels;
  std::vector<VelocityField> fields;
};
FieldContainer read_fields(const std::filesystem::path& dir);

std::filesystem::path snapshot_file(const std::filesystem::path& dir, std::size_t index);

// Raw little-endian float64 arrays, no header.
void write_f64(const std::filesystem::path& file, std::span<const double> values);
std::vector<double> read_f64(const std::filesystem::path& file);
/// Reads exactly `expected` values; a different payload size is a ValidationError.
std::vector<double> read_f64(const std::filesystem::path& file, std::size_t expected);

}  // namespace romscale
