#include "machlab/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <span>
#include <stdexcept>

namespace machlab {

namespace {

constexpr char kMagic[4] = {'M', 'L', 'F', '1'};

template <typename T>
void put_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw std::runtime_error("snapshot: truncated file");
  }
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("snapshot: cannot open " + path.string());
  out.write(kMagic, 4);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(snap.n));
  put_le<double>(out, snap.length);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(snap.fields.size()));
  for (const auto& f : snap.fields) {
    if (f.rows() != snap.n || f.cols() != snap.n) {
      throw std::invalid_argument("snapshot: field shape does not match n");
    }
    for (Eigen::Index j = 0; j < f.size(); ++j) put_le<double>(out, f(j));
  }
  if (!out) throw std::runtime_error("snapshot: write failed for " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("snapshot: cannot open " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error("snapshot: bad magic in " + path.string());
  }
  Snapshot snap;
  snap.n = static_cast<int>(get_le<std::uint32_t>(in));
  snap.length = get_le<double>(in);
  const auto count = get_le<std::uint32_t>(in);
  snap.fields.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    RealSamples f(snap.n, snap.n);
    for (Eigen::Index j = 0; j < f.size(); ++j) f(j) = get_le<double>(in);
    snap.fields.push_back(std::move(f));
  }
  return snap;
}

Snapshot make_snapshot(std::span<const SpectralField> components) {
  Snapshot snap;
  if (components.empty()) return snap;
  snap.n = components[0].grid.n();
  snap.length = components[0].grid.length();
  for (const auto& c : components) snap.fields.push_back(fft_inverse(c));
  return snap;
}

}  // namespace machlab
