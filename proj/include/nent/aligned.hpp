// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <new>
#include <vector>

namespace nent {

/// Cache-line alignment for scratch buffers, so that vector loads and stores
/// never split a line and timings do not depend on where malloc put them.
inline constexpr std::size_t kCacheLine = 64;

template <class V>
struct AlignedAllocator {
  using value_type = V;

  AlignedAllocator() noexcept = default;
  template <class W>
  AlignedAllocator(const AlignedAllocator<W>&) noexcept {}

  V* allocate(std::size_t count) {
    return static_cast<V*>(::operator new(count * sizeof(V), std::align_val_t{kCacheLine}));
  }
  void deallocate(V* p, std::size_t) noexcept { ::operator delete(p, std::align_val_t{kCacheLine}); }

  template <class W>
  friend bool operator==(const AlignedAllocator&, const AlignedAllocator<W>&) noexcept {
    return true;
  }
};

template <class V>
using AlignedVector = std::vector<V, AlignedAllocator<V>>;

}  // namespace nent
