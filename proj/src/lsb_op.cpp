// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <limits>
#include <string>

#include "nent/lsb_ops.hpp"

namespace nent {
namespace {

using u128 = unsigned __int128;

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturate(u128 v) {
  return v > kSaturated ? kSaturated : static_cast<std::uint64_t>(v);
}

std::uint64_t max_abs(const std::vector<std::int64_t>& g) {
  std::uint64_t best = 0;
  for (std::int64_t v : g) best = std::max(best, magnitude(v));
  return best;
}

u128 abs_sum(const std::vector<std::int64_t>& g) {
  u128 sum = 0;
  for (std::int64_t v : g) sum += magnitude(v);
  return sum;
}

void require_taps(const std::vector<std::int64_t>& g, std::string_view what) {
  if (g.empty()) throw ShapeError(std::string(what) + " kernel must not be empty");
}

// Wrapping (g << l) + g, the same arithmetic the streams see.
std::int64_t self_entangle_tap(std::int64_t g, int l) {
  const auto u = static_cast<std::uint64_t>(g);
  return static_cast<std::int64_t>((u << l) + u);
}

}  // namespace

std::string_view to_string(OpKind kind) noexcept {
  switch (kind) {
    case OpKind::elementwise_add: return "add";
    case OpKind::elementwise_sub: return "sub";
    case OpKind::elementwise_mul: return "mul";
    case OpKind::scale: return "scale";
    case OpKind::inner_product: return "dot";
    case OpKind::circular_convolution: return "conv";
    case OpKind::cross_correlation: return "xcorr";
    case OpKind::permutation: return "perm";
    case OpKind::row_gemm: return "gemm";
  }
  return "?";
}

std::optional<OpKind> parse_op_kind(std::string_view name) noexcept {
  for (OpKind k : {OpKind::elementwise_add, OpKind::elementwise_sub, OpKind::elementwise_mul,
                   OpKind::scale, OpKind::inner_product, OpKind::circular_convolution,
                   OpKind::cross_correlation, OpKind::permutation, OpKind::row_gemm}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

Permutation Permutation::inverse() const {
  Permutation inv;
  inv.index.resize(index.size());
  for (std::size_t j = 0; j < index.size(); ++j) inv.index[index[j]] = j;
  return inv;
}

LsbOp LsbOp::add(std::vector<std::int64_t> g) {
  require_taps(g, "add");
  return {OpKind::elementwise_add, std::move(g)};
}

LsbOp LsbOp::sub(std::vector<std::int64_t> g) {
  require_taps(g, "sub");
  return {OpKind::elementwise_sub, std::move(g)};
}

LsbOp LsbOp::mul(std::vector<std::int64_t> g) {
  require_taps(g, "mul");
  return {OpKind::elementwise_mul, std::move(g)};
}

LsbOp LsbOp::scale(std::int64_t s) { return {OpKind::scale, s}; }

LsbOp LsbOp::inner_product(std::vector<std::int64_t> g) {
  require_taps(g, "inner product");
  return {OpKind::inner_product, std::move(g)};
}

LsbOp LsbOp::convolution(std::vector<std::int64_t> g) {
  require_taps(g, "convolution");
  return {OpKind::circular_convolution, std::move(g)};
}

LsbOp LsbOp::correlation(std::vector<std::int64_t> g) {
  require_taps(g, "cross-correlation");
  return {OpKind::cross_correlation, std::move(g)};
}

LsbOp LsbOp::permutation(std::vector<std::size_t> index) {
  if (index.empty()) throw ShapeError("permutation must not be empty");
  std::vector<bool> seen(index.size(), false);
  for (std::size_t v : index) {
    if (v >= index.size() || seen[v]) {
      throw ShapeError("permutation is not a bijection on [0, " + std::to_string(index.size()) + ")");
    }
    seen[v] = true;
  }
  return {OpKind::permutation, Permutation{std::move(index)}};
}

LsbOp LsbOp::row_gemm(Matrix g) {
  if (g.rows == 0 || g.cols == 0) throw ShapeError("gemm kernel must not be empty");
  if (g.values.size() != g.rows * g.cols) {
    throw ShapeError("gemm kernel holds " + std::to_string(g.values.size()) + " values, expected " +
                     std::to_string(g.rows) + "x" + std::to_string(g.cols));
  }
  return {OpKind::row_gemm, std::move(g)};
}

std::size_t LsbOp::output_length(std::size_t n) const noexcept {
  switch (kind_) {
    case OpKind::inner_product: return 1;
    case OpKind::row_gemm: return std::get<Matrix>(kernel_).cols;
    default: return n;
  }
}

void LsbOp::check_input_length(std::size_t n) const {
  auto mismatch = [&](std::size_t expected, std::string_view rule) {
    throw ShapeError(std::string(to_string(kind_)) + " kernel of length " +
                     std::to_string(expected) + " does not fit streams of " + std::to_string(n) +
                     " samples (" + std::string(rule) + ")");
  };
  switch (kind_) {
    case OpKind::elementwise_add:
    case OpKind::elementwise_sub:
    case OpKind::elementwise_mul:
      if (taps().size() != 1 && taps().size() != n) mismatch(taps().size(), "need 1 or n");
      break;
    case OpKind::inner_product:
      if (taps().size() != n) mismatch(taps().size(), "need n");
      break;
    case OpKind::circular_convolution:
    case OpKind::cross_correlation:
      if (taps().size() > n) mismatch(taps().size(), "need at most n");
      break;
    case OpKind::permutation:
      if (mapping().index.size() != n) mismatch(mapping().index.size(), "need n");
      break;
    case OpKind::row_gemm:
      if (matrix().rows != n) mismatch(matrix().rows, "need n rows");
      break;
    case OpKind::scale:
      break;
  }
}

LsbOp self_entangled(const LsbOp& op, int l) {
  if (op.kind() != OpKind::elementwise_add && op.kind() != OpKind::elementwise_sub) return op;
  std::vector<std::int64_t> g = op.taps();
  for (auto& v : g) v = self_entangle_tap(v, l);
  return op.kind() == OpKind::elementwise_add ? LsbOp::add(std::move(g)) : LsbOp::sub(std::move(g));
}

LsbOp checksum_stream_op(const LsbOp& op, int m) {
  if (op.kind() != OpKind::elementwise_add && op.kind() != OpKind::elementwise_sub) return op;
  std::vector<std::int64_t> g = op.taps();
  for (auto& v : g) v = static_cast<std::int64_t>(static_cast<std::uint64_t>(v) * static_cast<std::uint64_t>(m));
  return op.kind() == OpKind::elementwise_add ? LsbOp::add(std::move(g)) : LsbOp::sub(std::move(g));
}

std::uint64_t worst_case_output(const LsbOp& op, std::uint64_t input_bound) {
  const u128 b = input_bound;
  switch (op.kind()) {
    case OpKind::elementwise_add:
    case OpKind::elementwise_sub:
      return saturate(b + max_abs(op.taps()));
    case OpKind::elementwise_mul:
      return saturate(b * max_abs(op.taps()));
    case OpKind::scale:
      return saturate(b * magnitude(op.scalar()));
    case OpKind::inner_product:
    case OpKind::circular_convolution:
    case OpKind::cross_correlation: {
      const u128 sum = abs_sum(op.taps());
      if (b != 0 && sum > u128{kSaturated}) return kSaturated;
      return saturate(b * sum);
    }
    case OpKind::permutation:
      return input_bound;
    case OpKind::row_gemm: {
      const Matrix& g = op.matrix();
      u128 worst_col = 0;
      for (std::size_t c = 0; c < g.cols; ++c) {
        u128 sum = 0;
        for (std::size_t r = 0; r < g.rows; ++r) sum += magnitude(g(r, c));
        worst_col = std::max(worst_col, sum);
      }
      if (b != 0 && worst_col > u128{kSaturated}) return kSaturated;
      return saturate(b * worst_col);
    }
  }
  return kSaturated;
}

OpBoundReport admit(const LsbOp& op, std::uint64_t input_bound, const RangeBound& limit) {
  OpBoundReport report;
  report.worst_case_output = worst_case_output(op, input_bound);
  report.limit = limit.hi;
  report.admitted = limit.hi >= 0 && report.worst_case_output <= static_cast<std::uint64_t>(limit.hi);
  return report;
}

OpBoundReport admit(const LsbOp& op, std::uint64_t input_bound, const CodecParams& p) {
  return admit(op, input_bound, output_range(p));
}

}  // namespace nent
