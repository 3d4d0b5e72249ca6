#ifndef GKDV_SNAPSHOT_HPP
#define GKDV_SNAPSHOT_HPP

#include <string>
#include <utility>

#include "gkdv/field.hpp"

namespace gkdv {

struct SnapshotMeta {
  int n_points = 0;
  double length = 0.0;
  double time = 0.0;
  int k = 0;
};

/// Write <base>.f64 (raw little-endian doubles) and the <base>.json sidecar
/// {n_points, length, time, k}.
void write_snapshot(const std::string& base, const Field& f, double time, int k);

/// Read a snapshot written by write_snapshot; `base` may include the .f64 or
/// .json suffix.
std::pair<Field, SnapshotMeta> read_snapshot(const std::string& base);

}  // namespace gkdv

#endif
