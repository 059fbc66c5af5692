// SPDX-License-Identifier: Apache-2.0

// Two's-complement word helpers. All stream arithmetic goes through the
// unsigned counterpart of the sample type, so intermediate wrap-around is well
// defined; results are exact whenever the true value fits the word.

#pragma once

#include <concepts>
#include <cstdint>
#include <type_traits>

namespace nent {

template <class T>
concept Sample = std::same_as<T, std::int8_t> || std::same_as<T, std::int16_t> ||
                 std::same_as<T, std::int32_t> || std::same_as<T, std::int64_t>;

template <Sample T>
inline constexpr int kBits = 8 * static_cast<int>(sizeof(T));

template <Sample T>
struct WordTraits;

// Wide is at least twice the width of the sample.
template <>
struct WordTraits<std::int8_t> {
  using Wide = std::int32_t;
  using UWide = std::uint32_t;
};
template <>
struct WordTraits<std::int16_t> {
  using Wide = std::int32_t;
  using UWide = std::uint32_t;
};
template <>
struct WordTraits<std::int32_t> {
  using Wide = std::int64_t;
  using UWide = std::uint64_t;
};
template <>
struct WordTraits<std::int64_t> {
  using Wide = __int128;
  using UWide = unsigned __int128;
};

template <Sample T>
using WideOf = typename WordTraits<T>::Wide;
template <Sample T>
using UWideOf = typename WordTraits<T>::UWide;

// Narrow types are lifted to unsigned int so products never promote to int.
template <Sample T>
using WrapOf = std::conditional_t<(sizeof(T) < sizeof(unsigned)), unsigned,
                                  std::make_unsigned_t<T>>;

template <Sample T>
constexpr WrapOf<T> to_wrap(std::int64_t v) noexcept {
  return static_cast<WrapOf<T>>(v);
}

template <Sample T>
constexpr T from_wrap(WrapOf<T> v) noexcept {
  return static_cast<T>(v);
}

/// Left arithmetic shift; bits leaving the word are discarded.
template <Sample T>
constexpr T shl(T v, int s) noexcept {
  return static_cast<T>(static_cast<WrapOf<T>>(v) << s);
}

template <Sample T>
constexpr T wrap_add(T a, T b) noexcept {
  return static_cast<T>(static_cast<WrapOf<T>>(a) + static_cast<WrapOf<T>>(b));
}

template <Sample T>
constexpr T wrap_sub(T a, T b) noexcept {
  return static_cast<T>(static_cast<WrapOf<T>>(a) - static_cast<WrapOf<T>>(b));
}

/// Keeps the low `bits` bits of `v` and replicates bit `bits - 1` upwards:
/// a left shift that discards the high bits followed by an arithmetic right
/// shift back into place.
template <class Wide, class UWide>
constexpr Wide sign_extend(UWide v, int bits) noexcept {
  constexpr int width = 8 * static_cast<int>(sizeof(Wide));
  if (bits >= width) return static_cast<Wide>(v);
  const int drop = width - bits;
  return static_cast<Wide>(static_cast<UWide>(v << drop)) >> drop;
}

constexpr std::uint64_t magnitude(std::int64_t v) noexcept {
  return v < 0 ? std::uint64_t{0} - static_cast<std::uint64_t>(v)
               : static_cast<std::uint64_t>(v);
}

}  // namespace nent
