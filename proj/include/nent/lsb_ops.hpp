// SPDX-License-Identifier: Apache-2.0

// Linear, sesquilinear and bijective stream operations with a fixed integer
// kernel. Every operation is linear in the stream argument, which is what
// lets it run unchanged on entangled streams.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nent/aligned.hpp"
#include "nent/block.hpp"
#include "nent/counters.hpp"
#include "nent/error.hpp"
#include "nent/params.hpp"
#include "nent/word.hpp"

namespace nent {

enum class OpKind {
  elementwise_add,
  elementwise_sub,
  elementwise_mul,
  scale,
  inner_product,
  circular_convolution,
  cross_correlation,
  permutation,
  row_gemm,
};

/// CLI spelling: add, sub, mul, scale, dot, conv, xcorr, perm, gemm.
std::string_view to_string(OpKind kind) noexcept;
std::optional<OpKind> parse_op_kind(std::string_view name) noexcept;

/// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int64_t> values;

  std::int64_t operator()(std::size_t i, std::size_t j) const noexcept {
    return values[i * cols + j];
  }
  friend bool operator==(const Matrix&, const Matrix&) = default;
};

/// Index map for out[j] = in[index[j]]; always a bijection on [0, n).
struct Permutation {
  std::vector<std::size_t> index;

  Permutation inverse() const;
  friend bool operator==(const Permutation&, const Permutation&) = default;
};

using Kernel = std::variant<std::vector<std::int64_t>, std::int64_t, Permutation, Matrix>;

class LsbOp {
 public:
  /// Element-wise ops take a kernel of the stream length, or of length one
  /// which is broadcast over the stream.
  static LsbOp add(std::vector<std::int64_t> g);
  static LsbOp sub(std::vector<std::int64_t> g);
  static LsbOp mul(std::vector<std::int64_t> g);
  static LsbOp scale(std::int64_t s);
  static LsbOp inner_product(std::vector<std::int64_t> g);
  /// Circular convolution; a kernel shorter than the stream is zero-padded.
  static LsbOp convolution(std::vector<std::int64_t> g);
  /// Circular cross-correlation; zero-padded like convolution().
  static LsbOp correlation(std::vector<std::int64_t> g);
  static LsbOp permutation(std::vector<std::size_t> index);
  /// out = in * G, with G.rows equal to the stream length.
  static LsbOp row_gemm(Matrix g);

  OpKind kind() const noexcept { return kind_; }
  const Kernel& kernel() const noexcept { return kernel_; }

  const std::vector<std::int64_t>& taps() const { return std::get<std::vector<std::int64_t>>(kernel_); }
  std::int64_t scalar() const { return std::get<std::int64_t>(kernel_); }
  const Permutation& mapping() const { return std::get<Permutation>(kernel_); }
  const Matrix& matrix() const { return std::get<Matrix>(kernel_); }

  /// Output samples per stream for inputs of `n` samples.
  std::size_t output_length(std::size_t n) const noexcept;

  /// Throws ShapeError if the kernel cannot be applied to streams of `n` samples.
  void check_input_length(std::size_t n) const;

  friend bool operator==(const LsbOp&, const LsbOp&) = default;

 private:
  LsbOp(OpKind kind, Kernel kernel) : kind_(kind), kernel_(std::move(kernel)) {}

  OpKind kind_;
  Kernel kernel_;
};

/// Kernel used on entangled streams. Additive kernels are entangled with
/// themselves, g <- (g << l) + g, so every stream receives the superposition
/// the codec expects; all other kinds are returned unchanged.
LsbOp self_entangled(const LsbOp& op, int l);

/// Kernel used on the checksum stream. Additive kernels are added once per
/// data stream, so the checksum stream gets m * g; others are unchanged.
LsbOp checksum_stream_op(const LsbOp& op, int m);

struct OpBoundReport {
  std::uint64_t worst_case_output = 0;
  bool admitted = false;
  std::int64_t limit = 0;
};

/// Conservative bound on |output| given |input| <= input_bound:
///   add/sub      input_bound + max|g|
///   mul          input_bound * max|g|
///   scale        input_bound * |s|
///   dot/conv/xcorr  input_bound * sum|g|
///   perm         input_bound
///   gemm         input_bound * max column abs-sum
/// Saturates at UINT64_MAX.
std::uint64_t worst_case_output(const LsbOp& op, std::uint64_t input_bound);

OpBoundReport admit(const LsbOp& op, std::uint64_t input_bound, const RangeBound& limit);

/// Admission against output_range(p).
OpBoundReport admit(const LsbOp& op, std::uint64_t input_bound, const CodecParams& p);

namespace detail {

inline constexpr std::size_t kConvTile = 2048;

// out[j] = sum_t g[t] * in[(j - t) mod n] for t < g.size().
template <Sample T>
void circular_convolve(std::span<const T> in, std::span<const std::int64_t> g, std::span<T> out) {
  using U = WrapOf<T>;
  const std::size_t n = in.size();
  const std::size_t taps = g.size();
  std::vector<U> gw(taps);
  for (std::size_t t = 0; t < taps; ++t) gw[t] = to_wrap<T>(g[t]);

  alignas(kCacheLine) std::array<U, kConvTile> acc;
  for (std::size_t j0 = 0; j0 < n; j0 += kConvTile) {
    const std::size_t len = std::min(kConvTile, n - j0);
    std::fill_n(acc.begin(), len, U{0});
    for (std::size_t t = 0; t < taps; ++t) {
      const U gt = gw[t];
      if (gt == 0) continue;
      // Source window starts at (j0 - t) mod n and may wrap once.
      std::size_t start = (j0 + n - t % n) % n;
      std::size_t i = 0;
      while (i < len) {
        const std::size_t run = std::min(len - i, n - start);
        const T* src = in.data() + start;
        U* dst = acc.data() + i;
        for (std::size_t q = 0; q < run; ++q) dst[q] += gt * static_cast<U>(src[q]);
        i += run;
        start = 0;
      }
    }
    for (std::size_t i = 0; i < len; ++i) out[j0 + i] = from_wrap<T>(acc[i]);
  }
}

template <Sample T>
std::uint64_t apply_stream_impl(const LsbOp& op, std::span<const T> in, std::span<T> out) {
  using U = WrapOf<T>;
  const std::size_t n = in.size();
  switch (op.kind()) {
    case OpKind::elementwise_add:
    case OpKind::elementwise_sub:
    case OpKind::elementwise_mul: {
      const auto& g = op.taps();
      const bool broadcast = g.size() == 1;
      for (std::size_t j = 0; j < n; ++j) {
        const U a = static_cast<U>(in[j]);
        const U b = to_wrap<T>(g[broadcast ? 0 : j]);
        U v;
        if (op.kind() == OpKind::elementwise_add) {
          v = a + b;
        } else if (op.kind() == OpKind::elementwise_sub) {
          v = a - b;
        } else {
          v = a * b;
        }
        out[j] = from_wrap<T>(v);
      }
      return n;
    }
    case OpKind::scale: {
      const U s = to_wrap<T>(op.scalar());
      for (std::size_t j = 0; j < n; ++j) out[j] = from_wrap<T>(static_cast<U>(in[j]) * s);
      return n;
    }
    case OpKind::inner_product: {
      const auto& g = op.taps();
      U acc = 0;
      for (std::size_t j = 0; j < n; ++j) acc += static_cast<U>(in[j]) * to_wrap<T>(g[j]);
      out[0] = from_wrap<T>(acc);
      return 2 * n;
    }
    case OpKind::circular_convolution: {
      circular_convolve<T>(in, op.taps(), out);
      return 2 * n * op.taps().size();
    }
    case OpKind::cross_correlation: {
      // out[j] = sum_i g[i] in[(i + j) mod n]. With rev[x] = in[(-x) mod n],
      // (rev * g)[u] = sum_i g[i] in[(i - u) mod n], so out[j] = (rev * g)[-j].
      std::vector<T> rev(n);
      std::vector<T> tmp(n);
      rev[0] = in[0];
      for (std::size_t x = 1; x < n; ++x) rev[x] = in[n - x];
      circular_convolve<T>(rev, op.taps(), tmp);
      out[0] = tmp[0];
      for (std::size_t j = 1; j < n; ++j) out[j] = tmp[n - j];
      return 2 * n * op.taps().size();
    }
    case OpKind::permutation: {
      const auto& idx = op.mapping().index;
      for (std::size_t j = 0; j < n; ++j) out[j] = in[idx[j]];
      return 0;
    }
    case OpKind::row_gemm: {
      const Matrix& g = op.matrix();
      std::vector<U> acc(g.cols, U{0});
      for (std::size_t i = 0; i < g.rows; ++i) {
        const U a = static_cast<U>(in[i]);
        const std::int64_t* row = g.values.data() + i * g.cols;
        for (std::size_t c = 0; c < g.cols; ++c) acc[c] += a * to_wrap<T>(row[c]);
      }
      for (std::size_t c = 0; c < g.cols; ++c) out[c] = from_wrap<T>(acc[c]);
      return 2 * g.rows * g.cols;
    }
  }
  throw ShapeError("unsupported operation kind");
}

}  // namespace detail

/// Applies `op` to one stream, the unit of work of a single worker.
/// `out` must hold op.output_length(in.size()) samples.
template <Sample T>
void apply_stream(const LsbOp& op, std::span<const T> in, std::span<T> out,
                  OpCounters* counters = nullptr) {
  op.check_input_length(in.size());
  if (out.size() != op.output_length(in.size())) {
    throw ShapeError("output buffer holds " + std::to_string(out.size()) + " samples, expected " +
                     std::to_string(op.output_length(in.size())));
  }
  const std::uint64_t ops = detail::apply_stream_impl<T>(op, in, out);
  if (counters != nullptr) counters->op_ops += ops;
}

/// d_m = c_m op g for every stream.
template <Sample T>
StreamBlock<T> apply_conventional(const LsbOp& op, const StreamBlock<T>& block,
                                  OpCounters* counters = nullptr) {
  op.check_input_length(block.samples());
  StreamBlock<T> out(block.params(), op.output_length(block.samples()));
  for (std::size_t m = 0; m < block.streams(); ++m) {
    apply_stream<T>(op, block.stream(m), out.stream(m), counters);
  }
  return out;
}

/// delta_m = eps_m op g, with additive kernels self-entangled first.
template <Sample T>
EntangledBlock<T> apply_entangled(const LsbOp& op, const EntangledBlock<T>& block,
                                  OpCounters* counters = nullptr) {
  op.check_input_length(block.samples());
  const LsbOp prepared = self_entangled(op, block.params().l);
  EntangledBlock<T> out(block.params(), op.output_length(block.samples()));
  for (std::size_t m = 0; m < block.streams(); ++m) {
    apply_stream<T>(prepared, block.stream(m), out.stream(m), counters);
  }
  return out;
}

}  // namespace nent
