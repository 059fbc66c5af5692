// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

namespace nent {

/// Geometry of an entanglement group: `m` streams in `w`-bit words, each
/// entangled stream carrying its predecessor shifted up by `l` bits, with
/// `k` bits of headroom on top.
///
/// Valid parameters satisfy m >= 3, 1 <= k <= l and (m - 1) * l + k <= w.
struct CodecParams {
  int m = 3;
  int w = 32;
  int l = 1;
  int k = 1;

  std::size_t streams() const noexcept { return static_cast<std::size_t>(m); }

  /// Signed bitwidth available to operation outputs, (m - 2) * l + k.
  int output_bitwidth() const noexcept { return (m - 2) * l + k; }

  friend bool operator==(const CodecParams&, const CodecParams&) = default;
};

/// Throws ParameterError unless `p` satisfies the invariants above (and w <= 64).
void validate(const CodecParams& p);

/// Chooses (l, k) maximizing the output bitwidth (m - 2) * l + k under
/// (m - 1) * l + k <= w and 1 <= k <= l; ties go to the smaller l.
CodecParams derive_params(int m, int w);

/// Symmetric inclusive interval [lo, hi] with lo == -hi.
struct RangeBound {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  static constexpr RangeBound symmetric(std::int64_t bound) noexcept {
    return {-bound, bound};
  }

  constexpr bool contains(std::int64_t v) const noexcept {
    return v >= lo && v <= hi;
  }

  friend bool operator==(const RangeBound&, const RangeBound&) = default;
};

/// Range every operation output must stay within for exact recovery.
///   m == 3: +/-(2^(l+k-1) - 2^l)
///   m >= 4: +/-2^((m-3)l+k) * (2^(l-1) - 1)
/// Collapses to +/-0 for degenerate parameters such as (3, 4, 1, 1).
RangeBound output_range(const CodecParams& p);

/// Range admitted by entangle(); equal to output_range() so that the identity
/// operation is always admissible.
RangeBound input_range(const CodecParams& p);

/// w - ceil(log2 m): the signed bitwidth left for data when one extra stream
/// holds the per-position sum of `m` streams.
int checksum_bitwidth(int m, int w);

/// +/-(2^(checksum_bitwidth - 1) - 1).
RangeBound checksum_range(int m, int w);

/// +/-(2^(w - 1) - 1).
RangeBound word_range(int w);

/// Index of the single unavailable stream, if any.
using FailedIndex = std::optional<std::size_t>;

}  // namespace nent
