// SPDX-License-Identifier: Apache-2.0

// Binary stream container.
//
//   offset  size  field
//   0       4     magic "NENT"
//   4       1     version (1)
//   5       1     word width w in bits: 16, 32 or 64
//   6       4     stream count m, little-endian
//   10      8     samples per stream n, little-endian
//   18      ...   m * n two's-complement w-bit little-endian samples,
//                 stream after stream
//
// Kernels use the same container with m = 1 (or one row per stream for a
// GEMM matrix).

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace nent {

inline constexpr std::uint8_t kStreamFileVersion = 1;
inline constexpr std::size_t kStreamFileHeaderSize = 18;

struct StreamFile {
  int w = 32;
  std::uint32_t m = 0;
  std::uint64_t n = 0;
  std::vector<std::int64_t> values;  // m * n, stream-major

  std::span<const std::int64_t> stream(std::size_t i) const noexcept {
    return {values.data() + i * n, static_cast<std::size_t>(n)};
  }

  friend bool operator==(const StreamFile&, const StreamFile&) = default;
};

/// Throws FormatError on a bad header, a short or oversized payload, or an
/// unsupported word width.
StreamFile read_stream_file(std::istream& in);
StreamFile read_stream_file(const std::filesystem::path& path);

/// Throws FormatError if the shape is inconsistent or a value does not fit w bits.
void write_stream_file(std::ostream& out, const StreamFile& file);
void write_stream_file(const std::filesystem::path& path, const StreamFile& file);

}  // namespace nent
