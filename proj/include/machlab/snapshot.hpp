#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "machlab/field.hpp"

namespace machlab {

/// Real-space field snapshot.
///
/// On disk: the four bytes "MLF1", u32 n, f64 L, u32 field_count, then
/// field_count blocks of n*n little-endian f64 samples.  Within a block the
/// x index runs fastest (row-major with rows indexed by y).
struct Snapshot {
  int n = 0;
  double length = 0.0;
  std::vector<RealSamples> fields;
};

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);
Snapshot read_snapshot(const std::filesystem::path& path);

/// Samples every component in real space.
Snapshot make_snapshot(std::span<const SpectralField> components);

}  // namespace machlab
