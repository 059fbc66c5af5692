// SPDX-License-Identifier: Apache-2.0

// Fail-stop execution harness. Each stream (or the checksum stream) is one
// logical worker; a failed worker's output buffer never becomes available.
// Failed buffers are filled with a poison pattern before recovery so that
// any accidental read shows up as a wrong result.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include "nent/block.hpp"
#include "nent/checksum.hpp"
#include "nent/counters.hpp"
#include "nent/entanglement.hpp"
#include "nent/error.hpp"
#include "nent/lsb_ops.hpp"
#include "nent/params.hpp"

namespace nent {

enum class Scheme { plain, entangled, checksum };

std::string_view to_string(Scheme scheme) noexcept;
std::optional<Scheme> parse_scheme(std::string_view name) noexcept;

struct NoFailure {};
struct FixedFailure {
  std::size_t worker = 0;
};
struct RandomFailure {
  std::uint64_t seed = 0;
};

using FailureMode = std::variant<NoFailure, FixedFailure, RandomFailure>;

struct FailureSpec {
  FailureMode mode = NoFailure{};
  Scheme scheme = Scheme::entangled;
};

/// m workers for plain and entangled runs, m + 1 for checksum runs.
std::size_t worker_count(Scheme scheme, int m);

/// Resolves the failing worker. RANDOM(seed) draws uniformly from the
/// workers with a seeded mt19937_64, so equal seeds pick the same worker.
/// Throws ParameterError for a FIXED index outside the worker range.
std::optional<std::size_t> resolve_failure(const FailureSpec& spec, int m);

/// Output range an operation must respect under each scheme.
RangeBound scheme_limit(Scheme scheme, const CodecParams& p);

enum class Execution { sequential, threaded };

template <Sample T>
struct RunReport {
  StreamBlock<T> outputs;
  std::optional<std::size_t> failed_worker;
  bool recovered = false;
  /// Set when a plain run lost a stream; that stream holds poison.
  std::optional<std::size_t> missing_stream;
  OpCounters counters;
};

/// Alternating minimum and maximum words.
template <Sample T>
void poison(std::span<T> buffer) noexcept {
  for (std::size_t j = 0; j < buffer.size(); ++j) {
    buffer[j] = (j % 2 == 0) ? std::numeric_limits<T>::min() : std::numeric_limits<T>::max();
  }
}

namespace detail {

// Runs job(i) for every worker except `failed`; each job owns its output span.
template <class Job>
void run_workers(std::size_t count, std::optional<std::size_t> failed, Execution exec,
                 std::vector<OpCounters>& counters, Job&& job) {
  counters.assign(count, OpCounters{});
  if (exec == Execution::sequential) {
    for (std::size_t i = 0; i < count; ++i) {
      if (failed != i) job(i, counters[i]);
    }
    return;
  }
  std::vector<std::jthread> threads;
  threads.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (failed == i) continue;
    threads.emplace_back([&job, &counters, i] { job(i, counters[i]); });
  }
}

template <Sample T>
void require_admitted(const LsbOp& op, std::uint64_t input_bound, Scheme scheme,
                      const CodecParams& p) {
  const OpBoundReport report = admit(op, input_bound, scheme_limit(scheme, p));
  if (!report.admitted) {
    throw RangeError(std::string(to_string(op.kind())) + " not admitted under " +
                     std::string(to_string(scheme)) + " scheme: worst-case output " +
                     std::to_string(report.worst_case_output) + " exceeds +/-" +
                     std::to_string(report.limit));
  }
}

}  // namespace detail

/// Runs `op` on `block` under the scheme of `spec`, injecting at most one
/// fail-stop event, and recovers the outputs where the scheme allows.
/// Throws RangeError if the inputs or the operation exceed the scheme's
/// range, ParameterError for an out-of-range FIXED worker.
template <Sample T>
RunReport<T> run_pipeline(const LsbOp& op, const StreamBlock<T>& block, const FailureSpec& spec,
                          Execution exec = Execution::sequential) {
  const CodecParams& p = block.params();
  op.check_input_length(block.samples());
  const std::size_t n_out = op.output_length(block.samples());
  const std::size_t workers = worker_count(spec.scheme, p.m);

  RunReport<T> report;
  report.failed_worker = resolve_failure(spec, p.m);
  detail::require_admitted<T>(op, max_abs(block), spec.scheme, p);

  std::vector<OpCounters> per_worker;
  switch (spec.scheme) {
    case Scheme::plain: {
      StreamBlock<T> out(p, n_out);
      detail::run_workers(workers, report.failed_worker, exec, per_worker,
                          [&](std::size_t i, OpCounters& c) {
                            apply_stream<T>(op, block.stream(i), out.stream(i), &c);
                          });
      for (const auto& c : per_worker) report.counters += c;
      if (report.failed_worker) {
        poison(out.stream(*report.failed_worker));
        report.missing_stream = report.failed_worker;
      }
      report.recovered = !report.failed_worker.has_value();
      report.outputs = std::move(out);
      break;
    }
    case Scheme::entangled: {
      const EntangledBlock<T> eps = entangle(block, &report.counters);
      const LsbOp prepared = self_entangled(op, p.l);
      EntangledBlock<T> delta(p, n_out);
      detail::run_workers(workers, report.failed_worker, exec, per_worker,
                          [&](std::size_t i, OpCounters& c) {
                            apply_stream<T>(prepared, eps.stream(i), delta.stream(i), &c);
                          });
      for (const auto& c : per_worker) report.counters += c;
      if (report.failed_worker) poison(delta.stream(*report.failed_worker));
      report.outputs = disentangle(std::move(delta), report.failed_worker, &report.counters);
      report.recovered = true;
      break;
    }
    case Scheme::checksum: {
      const ChecksumBlock<T> enc = checksum_encode(block, &report.counters);
      const LsbOp sum_op = checksum_stream_op(op, p.m);
      ChecksumBlock<T> processed(p, n_out);
      detail::run_workers(workers, report.failed_worker, exec, per_worker,
                          [&](std::size_t i, OpCounters& c) {
                            apply_stream<T>(i == enc.data_streams() ? sum_op : op, enc.stream(i),
                                            processed.stream(i), &c);
                          });
      for (const auto& c : per_worker) report.counters += c;
      if (report.failed_worker) poison(processed.stream(*report.failed_worker));
      report.outputs = checksum_recover(processed, report.failed_worker, &report.counters);
      report.recovered = true;
      break;
    }
  }
  return report;
}

/// Runs FIXED(r) for every worker r, then NONE, and throws Error unless all
/// recovered outputs agree.
template <Sample T>
std::vector<RunReport<T>> sweep_failures(const LsbOp& op, const StreamBlock<T>& block, Scheme scheme,
                                         Execution exec = Execution::sequential) {
  std::vector<RunReport<T>> reports;
  const std::size_t workers = worker_count(scheme, block.params().m);
  for (std::size_t r = 0; r <= workers; ++r) {
    FailureSpec spec;
    spec.scheme = scheme;
    if (r < workers) spec.mode = FixedFailure{r};
    reports.push_back(run_pipeline(op, block, spec, exec));
  }
  const RunReport<T>* reference = nullptr;
  for (const auto& rep : reports) {
    if (!rep.recovered) continue;
    if (reference == nullptr) {
      reference = &rep;
    } else if (!(rep.outputs == reference->outputs)) {
      throw Error("recovered outputs differ between failure at worker " +
                  std::to_string(reference->failed_worker.value_or(workers)) + " and worker " +
                  std::to_string(rep.failed_worker.value_or(workers)));
    }
  }
  return reports;
}

}  // namespace nent
