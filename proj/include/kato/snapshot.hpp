#pragma once

#include <string>

#include "kato/field.hpp"

namespace kato {

/// First line of a snapshot file.
struct SnapshotHeader {
  int dim = 0;
  double half_period = 0.0;
  int n = 0;
  bool complex = true;
  std::string dtype = "f64le";
};

/// Snapshot layout: one JSON header line {dim, L, n, complex, dtype}
/// followed by raw little-endian float64 samples in row-major order,
/// interleaved (re, im) when complex.  Round trips are bit-exact.
void write_snapshot(const std::string& path, const Field& f);
void write_snapshot(const std::string& path, const RealField& f);

SnapshotHeader read_snapshot_header(const std::string& path);
Field read_field_snapshot(const std::string& path);
/// Throws if the snapshot is complex.
RealField read_real_snapshot(const std::string& path);

}  // namespace kato
