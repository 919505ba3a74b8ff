// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include "psdc/planar_swe.hpp"

namespace psdc {

/// Binary snapshot layout (host byte order, little-endian on supported targets):
///
///   offset  size  field
///   0       8     magic "PSDCSWE1"
///   8       4     uint32 N
///   12      4     uint32 reserved (0)
///   16      8     double L
///   24      8     double phi_bar
///   32      8     double f0
///   40      8     double nu
///   48      8     double time
///   56      ...   three blocks of N x (N/2+1) complex<double> (re, im) in
///                 the state layout of PlanarSWE: phi', zeta, delta.
struct Snapshot {
  SweParams params;
  double time = 0.0;
  State state;
};

inline constexpr char kSnapshotMagic[8] = {'P', 'S', 'D', 'C', 'S', 'W', 'E', '1'};

void write_snapshot(const std::string& path, const PlanarSWE& problem, const State& state,
                    double time);
Snapshot read_snapshot(const std::string& path);

/// Lossless JSON export: {"N", "L", "phi_bar", "f0", "nu", "time",
/// "phi": [[re, im], ...], "zeta": ..., "delta": ...}. Intended for small grids.
std::string snapshot_to_json(const PlanarSWE& problem, const State& state, double time);
Snapshot snapshot_from_json(const std::string& text);

/// FNV-1a hash of the raw bytes of a state, for bit-for-bit comparisons.
std::uint64_t state_hash(const State& state);

}  // namespace psdc
