#pragma once

// Binary snapshot layout (all little-endian):
//   "OLDB2D01"  u32 version  u32 n  f64 L  f64 time  u32 field_count
//   field_count × { u8 name_length, name bytes, n×n f64 row-major }
// Fields written: u1 u2 a b c rho.

#include <string>

#include "oldb2d/fields.hpp"

namespace oldb2d {

inline constexpr char kSnapshotMagic[9] = "OLDB2D01";
inline constexpr std::uint32_t kSnapshotVersion = 1;

/// Throws FormatError on IO failure.
void write_snapshot(const SimState& state, const std::string& path);

/// Reads a snapshot; the grid is taken from the header. Throws FormatError
/// for IO failures, wrong magic or version, truncation, or missing fields.
SimState read_snapshot(const std::string& path);

/// As above, and additionally throws FormatError unless the header matches grid.
SimState read_snapshot(const std::string& path, const SpectralGrid& grid);

}  // namespace oldb2d
