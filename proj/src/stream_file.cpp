// SPDX-License-Identifier: Apache-2.0

#include "nent/stream_file.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>

#include "nent/error.hpp"

namespace nent {
namespace {

constexpr std::array<char, 4> kMagic{'N', 'E', 'N', 'T'};

bool supported_width(int w) { return w == 16 || w == 32 || w == 64; }

template <class U>
U load_le(const unsigned char* p, int bytes) {
  U v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = static_cast<U>((v << 8) | p[i]);
  return v;
}

void store_le(std::string& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::int64_t sign_extend_word(std::uint64_t raw, int w) {
  if (w == 64) return static_cast<std::int64_t>(raw);
  const int drop = 64 - w;
  return static_cast<std::int64_t>(raw << drop) >> drop;
}

}  // namespace

StreamFile read_stream_file(std::istream& in) {
  std::array<unsigned char, kStreamFileHeaderSize> header{};
  if (!in.read(reinterpret_cast<char*>(header.data()), header.size())) {
    throw FormatError("stream file shorter than its header");
  }
  if (!std::equal(kMagic.begin(), kMagic.end(), header.begin())) {
    throw FormatError("bad magic, expected \"NENT\"");
  }
  if (header[4] != kStreamFileVersion) {
    throw FormatError("unsupported stream file version " + std::to_string(header[4]));
  }
  StreamFile file;
  file.w = header[5];
  if (!supported_width(file.w)) throw FormatError("unsupported word width " + std::to_string(file.w));
  file.m = load_le<std::uint32_t>(header.data() + 6, 4);
  file.n = load_le<std::uint64_t>(header.data() + 10, 8);

  const int bytes = file.w / 8;
  std::string payload{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  const auto count = static_cast<unsigned __int128>(file.m) * file.n;
  if (count * bytes != payload.size()) {
    throw FormatError("payload holds " + std::to_string(payload.size()) + " bytes, header promises m=" +
                      std::to_string(file.m) + ", n=" + std::to_string(file.n) + " at " +
                      std::to_string(file.w) + " bits");
  }
  file.values.resize(static_cast<std::size_t>(count));
  const auto* p = reinterpret_cast<const unsigned char*>(payload.data());
  for (std::size_t i = 0; i < file.values.size(); ++i) {
    file.values[i] = sign_extend_word(load_le<std::uint64_t>(p + i * bytes, bytes), file.w);
  }
  return file;
}

StreamFile read_stream_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return read_stream_file(in);
}

void write_stream_file(std::ostream& out, const StreamFile& file) {
  if (!supported_width(file.w)) throw FormatError("unsupported word width " + std::to_string(file.w));
  if (file.values.size() != static_cast<std::size_t>(file.m) * file.n) {
    throw FormatError("value count does not match m * n");
  }
  const int bytes = file.w / 8;
  std::string buf(kMagic.begin(), kMagic.end());
  buf.reserve(kStreamFileHeaderSize + file.values.size() * bytes);
  buf.push_back(static_cast<char>(kStreamFileVersion));
  buf.push_back(static_cast<char>(file.w));
  store_le(buf, file.m, 4);
  store_le(buf, file.n, 8);
  for (std::int64_t v : file.values) {
    if (sign_extend_word(static_cast<std::uint64_t>(v), file.w) != v) {
      throw FormatError("value " + std::to_string(v) + " does not fit " + std::to_string(file.w) + " bits");
    }
    store_le(buf, static_cast<std::uint64_t>(v), bytes);
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw FormatError("write failed");
}

void write_stream_file(const std::filesystem::path& path, const StreamFile& file) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  write_stream_file(out, file);
}

}  // namespace nent
