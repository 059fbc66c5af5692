// SPDX-License-Identifier: Apache-2.0

// Checksum-stream baseline: one extra stream carries the per-position sum of
// the data streams, is processed like the others, and lets any single lost
// stream be rebuilt by subtraction.

#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "nent/aligned.hpp"
#include "nent/block.hpp"
#include "nent/counters.hpp"
#include "nent/error.hpp"
#include "nent/lsb_ops.hpp"
#include "nent/params.hpp"
#include "nent/word.hpp"

namespace nent {

/// m data streams followed by the checksum stream, m + 1 in total.
template <Sample T>
class ChecksumBlock {
 public:
  ChecksumBlock(const CodecParams& params, std::size_t n)
      : params_(params), n_(n), data_((params.streams() + 1) * n) {
    validate(params_);
    if (params_.w > kBits<T>) throw ParameterError("word width exceeds the sample type");
    if (n_ == 0) throw ShapeError("streams must hold at least one sample");
  }

  const CodecParams& params() const noexcept { return params_; }
  std::size_t data_streams() const noexcept { return params_.streams(); }
  std::size_t workers() const noexcept { return params_.streams() + 1; }
  std::size_t samples() const noexcept { return n_; }

  /// Stream `i` for i < m; i == m is the checksum stream.
  std::span<T> stream(std::size_t i) noexcept { return {data_.data() + i * n_, n_}; }
  std::span<const T> stream(std::size_t i) const noexcept { return {data_.data() + i * n_, n_}; }

  std::span<T> checksum() noexcept { return stream(data_streams()); }
  std::span<const T> checksum() const noexcept { return stream(data_streams()); }

  friend bool operator==(const ChecksumBlock&, const ChecksumBlock&) = default;

 private:
  CodecParams params_;
  std::size_t n_;
  AlignedVector<T> data_;
};

/// True if the checksum stream equals the per-position sum of the data streams.
template <Sample T>
bool checksum_consistent(const ChecksumBlock<T>& block) {
  for (std::size_t j = 0; j < block.samples(); ++j) {
    T sum = 0;
    for (std::size_t m = 0; m < block.data_streams(); ++m) sum = wrap_add(sum, block.stream(m)[j]);
    if (sum != block.checksum()[j]) return false;
  }
  return true;
}

/// Appends r[n] = sum_m c[m][n]. Inputs must fit checksum_range(m, w) so the
/// sum cannot overflow the word.
template <Sample T>
ChecksumBlock<T> checksum_encode(const StreamBlock<T>& block, OpCounters* counters = nullptr) {
  const CodecParams& p = block.params();
  check_range(block, checksum_range(p.m, p.w));
  ChecksumBlock<T> out(p, block.samples());
  auto sum = out.checksum();
  for (std::size_t m = 0; m < block.streams(); ++m) {
    const auto src = block.stream(m);
    std::ranges::copy(src, out.stream(m).begin());
    if (m == 0) {
      std::ranges::copy(src, sum.begin());
    } else {
      for (std::size_t j = 0; j < src.size(); ++j) sum[j] = wrap_add(sum[j], src[j]);
    }
  }
  if (counters != nullptr) counters->encode_ops += (block.streams() - 1) * block.samples();
  return out;
}

/// Runs `op` on all m + 1 streams. Additive kernels are scaled by m on the
/// checksum stream so the sum relation survives.
template <Sample T>
ChecksumBlock<T> checksum_apply(const LsbOp& op, const ChecksumBlock<T>& block,
                                OpCounters* counters = nullptr) {
  op.check_input_length(block.samples());
  const LsbOp sum_op = checksum_stream_op(op, block.params().m);
  ChecksumBlock<T> out(block.params(), op.output_length(block.samples()));
  for (std::size_t i = 0; i < block.workers(); ++i) {
    apply_stream<T>(i == block.data_streams() ? sum_op : op, block.stream(i), out.stream(i), counters);
  }
  return out;
}

/// Returns the m data streams, rebuilding stream `failed` (if it is a data
/// stream) as e - sum of the other data streams. Stream `failed` is never read.
template <Sample T>
StreamBlock<T> checksum_recover(const ChecksumBlock<T>& block, FailedIndex failed,
                                OpCounters* counters = nullptr) {
  const std::size_t m = block.data_streams();
  if (failed && *failed > m) {
    throw ParameterError("failed stream index " + std::to_string(*failed) + " out of range for " +
                         std::to_string(m + 1) + " streams");
  }
  StreamBlock<T> out(block.params(), block.samples());
  for (std::size_t i = 0; i < m; ++i) {
    if (failed == i) continue;
    std::ranges::copy(block.stream(i), out.stream(i).begin());
  }
  if (failed && *failed < m) {
    auto lost = out.stream(*failed);
    std::ranges::copy(block.checksum(), lost.begin());
    for (std::size_t i = 0; i < m; ++i) {
      if (i == *failed) continue;
      const auto src = block.stream(i);
      for (std::size_t j = 0; j < lost.size(); ++j) lost[j] = wrap_sub(lost[j], src[j]);
    }
    if (counters != nullptr) counters->decode_ops += (m - 1) * block.samples();
  }
  return out;
}

}  // namespace nent
