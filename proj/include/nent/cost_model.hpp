// SPDX-License-Identifier: Apache-2.0

// Closed-form operation counts (additions and multiplications, shifts
// ignored) for M streams of N samples.

#pragma once

#include <optional>
#include <string_view>

namespace nent {

enum class CostedOp { gemm, conv_time, conv_freq };

std::string_view to_string(CostedOp op) noexcept;

struct CostModel {
  double m = 3;
  double n = 1000;

  /// M subblocks of N x N times an N x N kernel: M N^3.
  double gemm() const noexcept;
  /// Time-domain convolution/correlation, overlap-save: 4 M N^2.
  double conv_time() const noexcept;
  /// Frequency-domain convolution: M [(45N + 15) log2(3N + 1) + 3N + 1].
  double conv_freq() const noexcept;

  /// Entanglement, extraction and recovery: 2 M N for streams, 2 M N^2 for GEMM.
  double ne_conv() const noexcept;
  double ne_gemm() const noexcept;

  /// Extra work of the checksum method: checksum generation and recovery
  /// (2 M N, or 2 M N^2 for GEMM) plus one more stream of the operation.
  double cs_gemm() const noexcept;
  double cs_conv_time() const noexcept;
  double cs_conv_freq() const noexcept;

  double operation(CostedOp op) const noexcept;
  double entanglement(CostedOp op) const noexcept;
  double checksum(CostedOp op) const noexcept;

  /// Overhead relative to the failure-intolerant operation count.
  double entanglement_ratio(CostedOp op) const noexcept { return entanglement(op) / operation(op); }
  double checksum_ratio(CostedOp op) const noexcept { return checksum(op) / operation(op); }
};

}  // namespace nent
