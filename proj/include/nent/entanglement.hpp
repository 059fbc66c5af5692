// SPDX-License-Identifier: Apache-2.0

// Numerical entanglement codec.
//
// Each entangled stream is its own input plus the preceding stream shifted
// up by l bits:
//
//   eps[m][n] = (c[(m - 1) mod M][n] << l) + c[m][n]
//
// Any operation that is linear in the stream argument commutes with this
// superposition, so the same relation holds between the operation outputs d
// and the entangled outputs delta. All M outputs can then be pulled back out
// of any M - 1 entangled outputs by shifts and additions.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>
#include <utility>

#include "nent/aligned.hpp"
#include "nent/block.hpp"
#include "nent/counters.hpp"
#include "nent/error.hpp"
#include "nent/params.hpp"
#include "nent/word.hpp"

namespace nent {
namespace detail {

inline constexpr std::size_t kTile = 1024;

inline std::size_t failed_or_zero(FailedIndex failed, std::size_t m) {
  const std::size_t r = failed.value_or(0);
  if (r >= m) {
    throw ParameterError("failed stream index " + std::to_string(r) +
                         " out of range for " + std::to_string(m) + " streams");
  }
  return r;
}

}  // namespace detail

/// Entangles `block` in place. Throws RangeError if any input lies outside
/// input_range(block.params()).
template <Sample T>
EntangledBlock<T> entangle(StreamBlock<T>&& block, OpCounters* counters = nullptr) {
  const CodecParams p = block.params();
  check_range(block, input_range(p));

  const std::size_t m = block.streams();
  const std::size_t n = block.samples();
  auto data = std::move(block).release();
  T* base = data.data();

  // The last input stream is overwritten before stream 0 needs it.
  std::array<T, detail::kTile> saved;
  for (std::size_t j0 = 0; j0 < n; j0 += detail::kTile) {
    const std::size_t len = std::min(detail::kTile, n - j0);
    std::copy_n(base + (m - 1) * n + j0, len, saved.data());
    for (std::size_t s = m - 1; s >= 1; --s) {
      T* out = base + s * n + j0;
      const T* prev = base + (s - 1) * n + j0;
      for (std::size_t i = 0; i < len; ++i) out[i] = wrap_add(out[i], shl(prev[i], p.l));
    }
    T* first = base + j0;
    for (std::size_t i = 0; i < len; ++i) first[i] = wrap_add(first[i], shl(saved[i], p.l));
  }

  if (counters != nullptr) {
    counters->encode_ops += m * n;
    counters->shifts += m * n;
  }
  return EntangledBlock<T>(p, n, std::move(data));
}

template <Sample T>
EntangledBlock<T> entangle(const StreamBlock<T>& block, OpCounters* counters = nullptr) {
  return entangle(StreamBlock<T>(block), counters);
}

namespace detail {

// Recovers one tile in place. rel[s] points at the tile of stream (r + s) mod M;
// rel[0] (the skipped stream) is written but never read. `acc` holds `len`
// double-width words.
template <Sample T>
void disentangle_tile(const CodecParams& p, T* const* rel, std::size_t len, UWideOf<T>* acc) {
  using Wide = WideOf<T>;
  using UWide = UWideOf<T>;
  const std::size_t m = p.streams();
  const int field = (p.m - 1) * p.l;
  const bool even = p.m % 2 == 0;

  const T* tail = rel[m - 1];
  for (std::size_t i = 0; i < len; ++i) acc[i] = static_cast<UWide>(static_cast<Wide>(tail[i]));
  for (std::size_t j = 0; j + 2 < m; ++j) {
    const T* src = rel[1 + j];
    const int sh = static_cast<int>(m - 2 - j) * p.l;
    if ((j + m) % 2 == 0) {
      for (std::size_t i = 0; i < len; ++i) acc[i] += static_cast<UWide>(static_cast<Wide>(src[i])) << sh;
    } else {
      for (std::size_t i = 0; i < len; ++i) acc[i] -= static_cast<UWide>(static_cast<Wide>(src[i])) << sh;
    }
  }

  T* prev_out = rel[m - 1];
  T* failed_out = rel[0];
  for (std::size_t i = 0; i < len; ++i) {
    const Wide low = sign_extend<Wide>(acc[i], field);
    const UWide high = even ? acc[i] - static_cast<UWide>(low) : static_cast<UWide>(low) - acc[i];
    prev_out[i] = static_cast<T>(low);
    failed_out[i] = static_cast<T>(static_cast<Wide>(high) >> field);
  }

  for (std::size_t s = 1; s + 1 < m; ++s) {
    T* cur = rel[s];
    const T* prev = rel[s - 1];
    for (std::size_t i = 0; i < len; ++i) cur[i] = wrap_sub(cur[i], shl(prev[i], p.l));
  }
}

}  // namespace detail

/// Recovers all M output streams in place from the entangled outputs,
/// never reading stream `failed` (stream 0 is skipped when no stream failed).
///
/// With r the skipped stream, the alternating shifted sum
///
///   d_temp = sum_{j=0}^{M-2} (-1)^j * (delta[r+1+j] << (M-2-j)l)
///          = (d[r] << (M-1)l) + (-1)^M d[r-1]
///
/// telescopes to two non-overlapping fields in a double-width accumulator.
/// The accumulator holds (-1)^M d_temp so the low field is +d[r-1] without a
/// negation; d[r] is the exact quotient of the high field, and the remaining
/// streams follow from d[r+m] = delta[r+m] - (d[r+m-1] << l).
template <Sample T>
StreamBlock<T> disentangle(EntangledBlock<T>&& block, FailedIndex failed,
                           OpCounters* counters = nullptr) {
  const CodecParams p = block.params();
  const std::size_t m = block.streams();
  const std::size_t n = block.samples();
  const std::size_t r = detail::failed_or_zero(failed, m);

  auto data = std::move(block).release();
  std::vector<T*> rel(m);
  alignas(kCacheLine) std::array<UWideOf<T>, detail::kTile> acc;
  for (std::size_t j0 = 0; j0 < n; j0 += detail::kTile) {
    for (std::size_t s = 0; s < m; ++s) rel[s] = data.data() + ((r + s) % m) * n + j0;
    detail::disentangle_tile(p, rel.data(), std::min(detail::kTile, n - j0), acc.data());
  }

  if (counters != nullptr) {
    counters->decode_ops += (2 * m - 3) * n;
    counters->shifts += (2 * m - 1) * n;
  }
  return StreamBlock<T>(p, n, std::move(data));
}

/// Copying variant; only the surviving streams are read.
template <Sample T>
StreamBlock<T> disentangle(const EntangledBlock<T>& block, FailedIndex failed,
                           OpCounters* counters = nullptr) {
  const std::size_t r = detail::failed_or_zero(failed, block.streams());
  EntangledBlock<T> work(block.params(), block.samples());
  for (std::size_t s = 0; s < block.streams(); ++s) {
    if (s == r) continue;
    std::ranges::copy(block.stream(s), work.stream(s).begin());
  }
  return disentangle(std::move(work), failed, counters);
}

/// Three-stream recovery written directly from the M = 3 construction, kept
/// as an independent cross-check of disentangle(). With streams a = r,
/// b = r + 1, c = r + 2:
///
///   t    = delta[c] - (delta[b] << l)   = d[c] - (d[a] << 2l)
///   d[c] = low 2l bits of t, sign-extended
///   d[a] = -(t - d[c]) >> 2l
///   d[b] = delta[b] - (d[a] << l)
template <Sample T>
StreamBlock<T> disentangle_m3(const EntangledBlock<T>& block, FailedIndex failed) {
  using Wide = WideOf<T>;
  using UWide = UWideOf<T>;
  constexpr int width = 8 * static_cast<int>(sizeof(Wide));

  const CodecParams& p = block.params();
  if (p.m != 3) throw ParameterError("disentangle_m3 needs m = 3, got m = " + std::to_string(p.m));
  const std::size_t a = detail::failed_or_zero(failed, 3);
  const std::size_t b = (a + 1) % 3;
  const std::size_t c = (a + 2) % 3;
  const int l = p.l;

  StreamBlock<T> out(p, block.samples());
  for (std::size_t j = 0; j < block.samples(); ++j) {
    const UWide t = static_cast<UWide>(static_cast<Wide>(block(c, j))) -
                    (static_cast<UWide>(static_cast<Wide>(block(b, j))) << l);
    const Wide dc = static_cast<Wide>(static_cast<UWide>(t << (width - 2 * l))) >> (width - 2 * l);
    const Wide da = static_cast<Wide>(static_cast<UWide>(dc) - t) >> (2 * l);
    out(c, j) = static_cast<T>(dc);
    out(a, j) = static_cast<T>(da);
    out(b, j) = wrap_sub(block(b, j), shl(static_cast<T>(da), l));
  }
  return out;
}

}  // namespace nent
