// SPDX-License-Identifier: Apache-2.0

// Cache-blocked execution of the sliding-window operations (circular
// convolution and cross-correlation). Every worker's share of one output tile
// is computed and, for the redundant schemes, encoded and recovered while it
// is still in cache: the entangled input window is built on the fly from the
// two plain streams it superposes, and the checksum window from the sum of all
// streams. Results are identical to run_pipeline.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "nent/aligned.hpp"
#include "nent/block.hpp"
#include "nent/entanglement.hpp"
#include "nent/error.hpp"
#include "nent/lsb_ops.hpp"
#include "nent/params.hpp"
#include "nent/pipeline.hpp"

namespace nent {
namespace detail {

inline constexpr std::size_t kWindowTile = 2048;

// Taps in window order: out[j0 + i] = sum_u taps[u] * window[i + u], where the
// window starts `back` samples before j0.
template <Sample T>
struct WindowPlan {
  std::vector<WrapOf<T>> taps;
  std::size_t back = 0;
};

template <Sample T>
WindowPlan<T> window_plan(const LsbOp& op) {
  WindowPlan<T> plan;
  const auto& g = op.taps();
  plan.taps.resize(g.size());
  if (op.kind() == OpKind::circular_convolution) {
    for (std::size_t u = 0; u < g.size(); ++u) plan.taps[u] = to_wrap<T>(g[g.size() - 1 - u]);
    plan.back = g.size() - 1;
  } else {
    for (std::size_t u = 0; u < g.size(); ++u) plan.taps[u] = to_wrap<T>(g[u]);
  }
  return plan;
}

// Calls f(source_offset, window_offset, run) for the contiguous pieces of the
// circular index range [start, start + count) of a length-n stream.
template <class F>
void for_each_run(std::size_t start, std::size_t count, std::size_t n, F&& f) {
  std::size_t pos = start;
  for (std::size_t done = 0; done < count;) {
    const std::size_t run = std::min(count - done, n - pos);
    f(pos, done, run);
    done += run;
    pos = 0;
  }
}

inline constexpr std::size_t kPage = 4096;

// Accumulator storage for one tile plus a page of slack. The accumulator is
// placed half a page away from the window it reads, so loads never alias the
// stores of the previous tap through the 4 KiB store-forwarding check, no
// matter where the allocator put either buffer.
template <Sample T>
class AccPool {
 public:
  using U = WrapOf<T>;

  explicit AccPool(std::size_t tile) : storage_(tile * sizeof(U) + kPage) {}

  U* place(const T* window) noexcept {
    const auto base = reinterpret_cast<std::uintptr_t>(storage_.data());
    const auto src = reinterpret_cast<std::uintptr_t>(window);
    const std::uintptr_t shift = ((src - kPage / 2 - base) % kPage) & ~std::uintptr_t{kCacheLine - 1};
    return reinterpret_cast<U*>(storage_.data() + shift);
  }

 private:
  AlignedVector<std::byte> storage_;
};

template <Sample T>
void window_tile(const WindowPlan<T>& plan, const T* window, std::size_t len, AccPool<T>& pool, T* out) {
  using U = WrapOf<T>;
  U* const acc = pool.place(window);
  std::fill_n(acc, len, U{0});
  for (std::size_t u = 0; u < plan.taps.size(); ++u) {
    const U gu = plan.taps[u];
    if (gu == 0) continue;
    const T* src = window + u;
    for (std::size_t q = 0; q < len; ++q) acc[q] += gu * static_cast<U>(src[q]);
  }
  for (std::size_t q = 0; q < len; ++q) out[q] = from_wrap<T>(acc[q]);
}

template <Sample T>
void check_tile(std::span<const T> tile, std::size_t stream, std::size_t offset, const RangeBound& bound) {
  T lo = std::numeric_limits<T>::max();
  T hi = std::numeric_limits<T>::min();
  for (T v : tile) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (bound.contains(lo) && bound.contains(hi)) return;
  for (std::size_t j = 0; j < tile.size(); ++j) {
    if (!bound.contains(tile[j])) throw RangeError(stream, offset + j, tile[j], bound.hi);
  }
}

}  // namespace detail

/// Runs a convolution or cross-correlation under `scheme` with at most one
/// failed worker, writing the recovered outputs into `out` (same params and
/// length as `in`). Inputs are validated tile by tile against the bound the
/// operation admits under the scheme. A failed plain worker leaves its
/// stream poisoned. Throws ShapeError for other operation kinds, RangeError
/// for inadmissible inputs and ParameterError for a bad worker index.
template <Sample T>
void run_window_op(const LsbOp& op, const StreamBlock<T>& in, Scheme scheme, FailedIndex failed,
                   StreamBlock<T>& out) {
  if (op.kind() != OpKind::circular_convolution && op.kind() != OpKind::cross_correlation) {
    throw ShapeError("tiled execution supports conv and xcorr, got " + std::string(to_string(op.kind())));
  }
  const CodecParams& p = in.params();
  const std::size_t m = in.streams();
  const std::size_t n = in.samples();
  op.check_input_length(n);
  if (!(out.params() == p) || out.samples() != n) throw ShapeError("output block does not match the input");
  const std::size_t workers = worker_count(scheme, p.m);
  if (failed && *failed >= workers) {
    throw ParameterError("failed worker " + std::to_string(*failed) + " out of range for " +
                         std::to_string(workers) + " workers");
  }

  const RangeBound limit = scheme_limit(scheme, p);
  const std::uint64_t gain = std::max<std::uint64_t>(1, worst_case_output(op, 1));
  const RangeBound admitted = RangeBound::symmetric(
      limit.hi < 0 ? 0 : static_cast<std::int64_t>(static_cast<std::uint64_t>(limit.hi) / gain));

  const auto plan = detail::window_plan<T>(op);
  const std::size_t tile = detail::kWindowTile;
  AlignedVector<T> window(tile + plan.taps.size() - 1);
  detail::AccPool<T> acc(tile);
  AlignedVector<T> sum_tile;
  AlignedVector<UWideOf<T>> wide;
  std::vector<T*> rel(m);
  if (scheme == Scheme::checksum) sum_tile.resize(tile);
  if (scheme == Scheme::entangled) wide.resize(tile);

  auto skip = [&](std::size_t w) { return failed && *failed == w; };

  for (std::size_t j0 = 0; j0 < n; j0 += tile) {
    const std::size_t len = std::min(tile, n - j0);
    const std::size_t wlen = len + plan.taps.size() - 1;
    const std::size_t wstart = (j0 + n - plan.back % n) % n;
    for (std::size_t s = 0; s < m; ++s) detail::check_tile(in.stream(s).subspan(j0, len), s, j0, admitted);

    switch (scheme) {
      case Scheme::plain: {
        for (std::size_t s = 0; s < m; ++s) {
          if (skip(s)) continue;
          const T* src = in.stream(s).data();
          const T* win = src + wstart;
          if (wstart + wlen > n) {
            detail::for_each_run(wstart, wlen, n, [&](std::size_t pos, std::size_t off, std::size_t run) {
              std::copy_n(src + pos, run, window.data() + off);
            });
            win = window.data();
          }
          detail::window_tile(plan, win, len, acc, out.stream(s).data() + j0);
        }
        break;
      }
      case Scheme::entangled: {
        for (std::size_t s = 0; s < m; ++s) {
          if (skip(s)) continue;
          const T* prev = in.stream((s + m - 1) % m).data();
          const T* cur = in.stream(s).data();
          detail::for_each_run(wstart, wlen, n, [&](std::size_t pos, std::size_t off, std::size_t run) {
            T* dst = window.data() + off;
            for (std::size_t q = 0; q < run; ++q) dst[q] = wrap_add(shl(prev[pos + q], p.l), cur[pos + q]);
          });
          detail::window_tile(plan, window.data(), len, acc, out.stream(s).data() + j0);
        }
        const std::size_t r = failed.value_or(0);
        for (std::size_t s = 0; s < m; ++s) rel[s] = out.stream((r + s) % m).data() + j0;
        detail::disentangle_tile(p, rel.data(), len, wide.data());
        break;
      }
      case Scheme::checksum: {
        for (std::size_t s = 0; s < m; ++s) {
          if (skip(s)) continue;
          const T* src = in.stream(s).data();
          const T* win = src + wstart;
          if (wstart + wlen > n) {
            detail::for_each_run(wstart, wlen, n, [&](std::size_t pos, std::size_t off, std::size_t run) {
              std::copy_n(src + pos, run, window.data() + off);
            });
            win = window.data();
          }
          detail::window_tile(plan, win, len, acc, out.stream(s).data() + j0);
        }
        if (skip(m)) break;
        detail::for_each_run(wstart, wlen, n, [&](std::size_t pos, std::size_t off, std::size_t run) {
          T* dst = window.data() + off;
          std::copy_n(in.stream(0).data() + pos, run, dst);
          for (std::size_t s = 1; s < m; ++s) {
            const T* src = in.stream(s).data() + pos;
            for (std::size_t q = 0; q < run; ++q) dst[q] = wrap_add(dst[q], src[q]);
          }
        });
        detail::window_tile(plan, window.data(), len, acc, sum_tile.data());
        if (failed) {
          T* lost = out.stream(*failed).data() + j0;
          std::copy_n(sum_tile.data(), len, lost);
          for (std::size_t s = 0; s < m; ++s) {
            if (s == *failed) continue;
            const T* d = out.stream(s).data() + j0;
            for (std::size_t q = 0; q < len; ++q) lost[q] = wrap_sub(lost[q], d[q]);
          }
        }
        break;
      }
    }
  }
  if (scheme == Scheme::plain && failed) poison(out.stream(*failed));
}

}  // namespace nent
