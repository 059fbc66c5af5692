// SPDX-License-Identifier: Apache-2.0

// Shared generators for the unit and acceptance tests.

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "nent/block.hpp"
#include "nent/lsb_ops.hpp"
#include "nent/params.hpp"

namespace nent::testing {

inline constexpr OpKind kAllKinds[] = {
    OpKind::elementwise_add, OpKind::elementwise_sub,      OpKind::elementwise_mul,
    OpKind::scale,           OpKind::inner_product,        OpKind::circular_convolution,
    OpKind::cross_correlation, OpKind::permutation,        OpKind::row_gemm,
};

inline std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

/// Uniform samples in [-bound, bound]; roughly one in eight is pinned to a
/// boundary value so the extremes are always exercised.
template <Sample T, class Tag = PlainTag>
BasicBlock<T, Tag> random_block(const CodecParams& p, std::size_t n, std::int64_t bound,
                                std::mt19937_64& rng) {
  BasicBlock<T, Tag> block(p, n);
  for (T& v : block.values()) {
    const std::int64_t pick = uniform(rng, 0, 15);
    if (pick == 0) {
      v = static_cast<T>(bound);
    } else if (pick == 1) {
      v = static_cast<T>(-bound);
    } else {
      v = static_cast<T>(uniform(rng, -bound, bound));
    }
  }
  return block;
}

inline std::vector<std::int64_t> random_taps(std::size_t len, std::int64_t mag, std::mt19937_64& rng) {
  std::vector<std::int64_t> g(len);
  for (auto& v : g) v = uniform(rng, -mag, mag);
  return g;
}

/// A random operation of `kind` for streams of n samples, paired with the
/// largest input bound it admits under `limit`.
struct OpCase {
  LsbOp op;
  std::int64_t input_bound;
};

inline OpCase random_op(OpKind kind, std::size_t n, std::int64_t limit, std::mt19937_64& rng) {
  auto by_gain = [&](LsbOp op) {
    const std::uint64_t gain = std::max<std::uint64_t>(1, worst_case_output(op, 1));
    return OpCase{std::move(op), static_cast<std::int64_t>(static_cast<std::uint64_t>(limit) / gain)};
  };
  switch (kind) {
    case OpKind::elementwise_add:
    case OpKind::elementwise_sub: {
      const std::int64_t half = limit / 2;
      auto g = random_taps(n, half, rng);
      LsbOp op = kind == OpKind::elementwise_add ? LsbOp::add(std::move(g)) : LsbOp::sub(std::move(g));
      return {std::move(op), limit - half};
    }
    case OpKind::elementwise_mul: return by_gain(LsbOp::mul(random_taps(n, 7, rng)));
    case OpKind::scale: return by_gain(LsbOp::scale(uniform(rng, -5, 5)));
    case OpKind::inner_product: return by_gain(LsbOp::inner_product(random_taps(n, 3, rng)));
    case OpKind::circular_convolution:
      return by_gain(LsbOp::convolution(random_taps(std::min<std::size_t>(n, 8), 5, rng)));
    case OpKind::cross_correlation:
      return by_gain(LsbOp::correlation(random_taps(std::min<std::size_t>(n, 8), 5, rng)));
    case OpKind::permutation: {
      std::vector<std::size_t> index(n);
      std::iota(index.begin(), index.end(), std::size_t{0});
      std::shuffle(index.begin(), index.end(), rng);
      return {LsbOp::permutation(std::move(index)), limit};
    }
    case OpKind::row_gemm: {
      Matrix g{n, std::max<std::size_t>(1, n / 2), {}};
      g.values = random_taps(g.rows * g.cols, 2, rng);
      return by_gain(LsbOp::row_gemm(std::move(g)));
    }
  }
  return {LsbOp::scale(1), limit};
}

/// Output limit valid for the plain, entangled and checksum schemes at once.
inline std::int64_t common_limit(const CodecParams& p) {
  return std::min(output_range(p).hi, checksum_range(p.m, p.w).hi);
}

}  // namespace nent::testing
