// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace nent {

/// Additions and multiplications spent per phase. Arithmetic shifts are
/// tallied in `shifts` and left out of every total.
struct OpCounters {
  std::uint64_t encode_ops = 0;
  std::uint64_t op_ops = 0;
  std::uint64_t decode_ops = 0;
  std::uint64_t shifts = 0;

  std::uint64_t redundancy_ops() const noexcept { return encode_ops + decode_ops; }
  std::uint64_t total() const noexcept { return encode_ops + op_ops + decode_ops; }

  OpCounters& operator+=(const OpCounters& o) noexcept {
    encode_ops += o.encode_ops;
    op_ops += o.op_ops;
    decode_ops += o.decode_ops;
    shifts += o.shifts;
    return *this;
  }

  friend bool operator==(const OpCounters&, const OpCounters&) = default;
};

}  // namespace nent
