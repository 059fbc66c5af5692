// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nent {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Infeasible or inconsistent codec parameters, bad failure index.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Kernel or stream shape does not fit the operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Malformed stream file.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A value (or a worst-case operation output) lies outside the admissible range.
class RangeError : public Error {
 public:
  RangeError(std::size_t stream, std::size_t position, std::int64_t value,
             std::int64_t bound)
      : Error("value " + std::to_string(value) + " at stream " +
              std::to_string(stream) + ", position " +
              std::to_string(position) + " exceeds bound +/-" +
              std::to_string(bound)),
        stream_(stream),
        position_(position),
        value_(value),
        bound_(bound) {}

  explicit RangeError(const std::string& what) : Error(what) {}

  std::size_t stream() const noexcept { return stream_; }
  std::size_t position() const noexcept { return position_; }
  std::int64_t value() const noexcept { return value_; }
  std::int64_t bound() const noexcept { return bound_; }

 private:
  std::size_t stream_ = 0;
  std::size_t position_ = 0;
  std::int64_t value_ = 0;
  std::int64_t bound_ = 0;
};

/// A worker failed and the scheme carries no redundancy to recover it.
class UnrecoverableError : public Error {
 public:
  explicit UnrecoverableError(std::size_t stream)
      : Error("stream " + std::to_string(stream) +
              " failed and cannot be recovered without redundancy"),
        stream_(stream) {}

  std::size_t stream() const noexcept { return stream_; }

 private:
  std::size_t stream_;
};

}  // namespace nent
