// SPDX-License-Identifier: Apache-2.0

// Throughput comparison of the failure-intolerant, entangled and checksum
// schemes on the same data, without failure injection.
//
// Timing: one warm-up pass, then `reps` passes with the three schemes
// interleaved; each row reports the median. Throughput counts input samples
// over all streams per second. Output buffers are allocated outside the timed
// region, and all schemes share the tiled schedule of run_window_op, which
// validates inputs, encodes, operates and recovers one cache-sized tile at a
// time.

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "nent/lsb_ops.hpp"
#include "nent/pipeline.hpp"

namespace nent {

struct BenchConfig {
  OpKind op = OpKind::circular_convolution;
  std::size_t n = 1'000'000;
  std::vector<std::size_t> kernel_sizes{100, 1024, 4500};
  std::vector<int> ms{3, 8};
  int w = 32;
  int reps = 5;
  std::uint64_t seed = 1;
};

struct BenchRow {
  Scheme scheme = Scheme::plain;
  int m = 0;
  std::size_t n = 0;
  std::size_t kernel = 0;
  double median_throughput = 0;     // samples per second
  double relative_overhead_pct = 0; // throughput loss against the plain row
};

/// Runs the benchmark; progress and warnings go to `log`. Only conv and xcorr
/// are supported. Shrinks n (with a warning) when the working set would not
/// fit in available memory. Throws Error if a scheme's outputs disagree with
/// the failure-intolerant run.
std::vector<BenchRow> run_bench(const BenchConfig& config, std::ostream& log);

/// Header: scheme,m,n,kernel,median_throughput,relative_overhead_pct
void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows);

}  // namespace nent
