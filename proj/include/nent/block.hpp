// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nent/aligned.hpp"
#include "nent/error.hpp"
#include "nent/params.hpp"
#include "nent/word.hpp"

namespace nent {

struct PlainTag {};
struct EntangledTag {};

/// `params.m` streams of `samples()` values each, stored stream-major in one
/// contiguous buffer. The tag keeps plain and entangled data apart at the
/// type level; the layout is identical so in-place conversions just move the
/// buffer.
template <Sample T, class Tag>
class BasicBlock {
 public:
  using value_type = T;
  using Buffer = AlignedVector<T>;

  BasicBlock() = default;

  BasicBlock(const CodecParams& params, std::size_t n)
      : params_(params), n_(n), data_(params.streams() * n) {
    check();
  }

  BasicBlock(const CodecParams& params, std::size_t n, const std::vector<T>& data)
      : params_(params), n_(n), data_(data.begin(), data.end()) {
    check();
  }

  BasicBlock(const CodecParams& params, std::size_t n, Buffer&& data)
      : params_(params), n_(n), data_(std::move(data)) {
    check();
  }

  /// Builds a block from per-stream vectors of equal length.
  static BasicBlock from_streams(const CodecParams& params,
                                 const std::vector<std::vector<T>>& streams) {
    if (streams.size() != params.streams()) {
      throw ShapeError("expected " + std::to_string(params.m) + " streams, got " +
                       std::to_string(streams.size()));
    }
    const std::size_t n = streams.empty() ? 0 : streams.front().size();
    Buffer data;
    data.reserve(params.streams() * n);
    for (const auto& s : streams) {
      if (s.size() != n) throw ShapeError("streams have unequal lengths");
      data.insert(data.end(), s.begin(), s.end());
    }
    return BasicBlock(params, n, std::move(data));
  }

  const CodecParams& params() const noexcept { return params_; }
  std::size_t streams() const noexcept { return params_.streams(); }
  std::size_t samples() const noexcept { return n_; }

  std::span<T> stream(std::size_t m) noexcept { return {data_.data() + m * n_, n_}; }
  std::span<const T> stream(std::size_t m) const noexcept {
    return {data_.data() + m * n_, n_};
  }

  T& operator()(std::size_t m, std::size_t j) noexcept { return data_[m * n_ + j]; }
  T operator()(std::size_t m, std::size_t j) const noexcept { return data_[m * n_ + j]; }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  Buffer release() && noexcept { return std::move(data_); }

  friend bool operator==(const BasicBlock&, const BasicBlock&) = default;

 private:
  void check() const {
    validate(params_);
    if (params_.w > kBits<T>) {
      throw ParameterError("word width " + std::to_string(params_.w) +
                           " exceeds the " + std::to_string(kBits<T>) +
                           "-bit sample type");
    }
    if (n_ == 0) throw ShapeError("streams must hold at least one sample");
    if (data_.size() != params_.streams() * n_) {
      throw ShapeError("buffer holds " + std::to_string(data_.size()) +
                       " values, expected m*n = " +
                       std::to_string(params_.streams() * n_));
    }
  }

  CodecParams params_{};
  std::size_t n_ = 0;
  Buffer data_;
};

template <Sample T>
using StreamBlock = BasicBlock<T, PlainTag>;

template <Sample T>
using EntangledBlock = BasicBlock<T, EntangledTag>;

/// Largest |value| over the block.
template <Sample T, class Tag>
std::uint64_t max_abs(const BasicBlock<T, Tag>& block) noexcept {
  std::uint64_t best = 0;
  for (T v : block.values()) best = std::max(best, magnitude(v));
  return best;
}

/// Throws RangeError naming the first element of `block` outside `range`.
template <Sample T, class Tag>
void check_range(const BasicBlock<T, Tag>& block, const RangeBound& range) {
  for (std::size_t m = 0; m < block.streams(); ++m) {
    const auto s = block.stream(m);
    // Value-only reduction so the common in-range case vectorizes.
    T lo = std::numeric_limits<T>::max();
    T hi = std::numeric_limits<T>::min();
    for (T v : s) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (s.empty() || (range.contains(lo) && range.contains(hi))) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (!range.contains(s[j])) throw RangeError(m, j, s[j], range.hi);
    }
  }
}

}  // namespace nent
