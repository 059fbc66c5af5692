// SPDX-License-Identifier: Apache-2.0

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Each criterion also carries a wall-clock budget.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "nent/bench.hpp"
#include "nent/checksum.hpp"
#include "nent/cli.hpp"
#include "nent/cost_model.hpp"
#include "nent/entanglement.hpp"
#include "nent/pipeline.hpp"
#include "support.hpp"

namespace {

using namespace nent;
using nent::testing::kAllKinds;
using nent::testing::random_block;
using nent::testing::random_op;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::vector<FailedIndex> failure_indices(std::size_t workers) {
  std::vector<FailedIndex> out{std::nullopt};
  for (std::size_t r = 0; r < workers; ++r) out.emplace_back(r);
  return out;
}

Outcome table_reproduction() {
  Outcome o;
  std::ostringstream out, err;
  const int code = cli::run({"params", "--table1"}, out, err);
  const std::string expected =
      "   M    l    k  entangled  checksum\n"
      "   3   11   10         21        30\n"
      "   4    8    8         24        30\n"
      "   5    7    4         25        29\n"
      "   8    4    4         28        29\n"
      "  11    3    2         29        28\n"
      "  16    2    2         30        28\n"
      "  32    1    1         31        27\n";
  o.require(code == 0, "exit code " + std::to_string(code));
  o.require(out.str() == expected, "table differs:\n" + out.str());
  if (o.pass) o.note("7 rows exact");
  return o;
}

Outcome roundtrip() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::size_t checked = 0;
  for (int m : {3, 4, 5, 8, 11, 16, 32}) {
    const CodecParams p = derive_params(m, 32);
    const auto block = random_block<std::int32_t>(p, 10000, input_range(p).hi, rng);
    const auto eps = entangle(block);
    for (FailedIndex r : failure_indices(block.streams())) {
      auto lost = eps;
      if (r) poison(lost.stream(*r));
      const bool ok = disentangle(std::move(lost), r) == block;
      o.require(ok, fmt::format("m={} r={} mismatch", m, r ? std::to_string(*r) : "none"));
      ++checked;
    }
    if (input_range(p).hi == 0) o.note(fmt::format("m={} admits only 0 (range +/-0)", m));
  }
  o.note(fmt::format("{} (M, r) cases x 10^4 positions", checked));
  return o;
}

Outcome exhaustive_small_word() {
  Outcome o;
  const CodecParams p = derive_params(3, 8);
  const std::int64_t hi = input_range(p).hi;
  const std::size_t side = static_cast<std::size_t>(2 * hi + 1);
  StreamBlock<std::int8_t> block(p, side * side * side);
  std::size_t j = 0;
  for (std::int64_t a = -hi; a <= hi; ++a) {
    for (std::int64_t b = -hi; b <= hi; ++b) {
      for (std::int64_t c = -hi; c <= hi; ++c, ++j) {
        block(0, j) = static_cast<std::int8_t>(a);
        block(1, j) = static_cast<std::int8_t>(b);
        block(2, j) = static_cast<std::int8_t>(c);
      }
    }
  }
  const auto eps = entangle(block);
  for (FailedIndex r : failure_indices(3)) {
    auto lost = eps;
    if (r) poison(lost.stream(*r));
    o.require(disentangle(lost, r) == block, "general path mismatch");
    o.require(disentangle_m3(lost, r) == block, "three-stream path mismatch");
  }
  o.note(fmt::format("l={} k={} range +/-{}, {} triples x 4 failure cases", p.l, p.k, hi, block.samples()));
  return o;
}

Outcome homomorphism() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::size_t cases = 0;
  for (int m : {3, 8}) {
    const CodecParams p = derive_params(m, 32);
    for (OpKind kind : kAllKinds) {
      const auto [op, bound] = random_op(kind, 256, output_range(p).hi, rng);
      o.require(admit(op, bound, p).admitted, fmt::format("{} m={} not admitted", to_string(kind), m));
      const auto block = random_block<std::int32_t>(p, 256, bound, rng);
      const auto expected = apply_conventional(op, block);
      const auto delta = apply_entangled(op, entangle(block));
      for (FailedIndex r : failure_indices(block.streams())) {
        auto lost = delta;
        if (r) poison(lost.stream(*r));
        o.require(disentangle(std::move(lost), r) == expected,
                  fmt::format("{} m={} r={}", to_string(kind), m, r ? std::to_string(*r) : "none"));
        ++cases;
      }
    }
  }
  // Without kernel self-entanglement an additive kernel must break recovery.
  const CodecParams p = derive_params(3, 32);
  const auto block = random_block<std::int32_t>(p, 256, 1000, rng);
  const LsbOp add = LsbOp::add(nent::testing::random_taps(256, 1000, rng));
  const auto eps = entangle(block);
  EntangledBlock<std::int32_t> raw(p, 256);
  for (std::size_t s = 0; s < 3; ++s) apply_stream<std::int32_t>(add, eps.stream(s), raw.stream(s));
  bool all_wrong = true;
  for (FailedIndex r : failure_indices(3)) all_wrong = all_wrong && !(disentangle(raw, r) == apply_conventional(add, block));
  o.require(all_wrong, "unentangled additive kernel still recovered");
  o.note(fmt::format("{} cases exact, negative control fails as expected", cases));
  return o;
}

Outcome checksum_equivalence() {
  Outcome o;
  std::mt19937_64 rng(78);
  std::size_t cases = 0;
  for (int m : {3, 8}) {
    const CodecParams p = derive_params(m, 32);
    for (OpKind kind : kAllKinds) {
      const auto [op, bound] = random_op(kind, 256, checksum_range(m, 32).hi, rng);
      const auto block = random_block<std::int32_t>(p, 256, bound, rng);
      const auto expected = apply_conventional(op, block);
      const auto processed = checksum_apply(op, checksum_encode(block));
      for (FailedIndex r : failure_indices(block.streams() + 1)) {
        auto lost = processed;
        if (r) poison(lost.stream(*r));
        o.require(checksum_recover(lost, r) == expected,
                  fmt::format("{} m={} r={}", to_string(kind), m, r ? std::to_string(*r) : "none"));
        ++cases;
      }
    }
  }
  // The m * g correction: adding the plain kernel to the checksum stream breaks it.
  const CodecParams p = derive_params(3, 32);
  const auto block = random_block<std::int32_t>(p, 64, 1000, rng);
  const LsbOp add = LsbOp::add({9});
  const auto enc = checksum_encode(block);
  ChecksumBlock<std::int32_t> naive(p, 64);
  for (std::size_t i = 0; i < 4; ++i) apply_stream<std::int32_t>(add, enc.stream(i), naive.stream(i));
  o.require(!(checksum_recover(naive, 0) == apply_conventional(add, block)), "uncorrected additive kernel recovered");
  o.require(checksum_consistent(checksum_apply(add, enc)), "corrected additive kernel broke the checksum");
  o.note(fmt::format("{} cases exact incl. checksum-stream failure; m*g correction verified", cases));
  return o;
}

Outcome cost_ratios() {
  Outcome o;
  const double ne = CostModel{3, 1000}.entanglement_ratio(CostedOp::conv_time);
  o.require(std::abs(ne - 0.0005) < 1e-12 && ne < 0.003, fmt::format("entangled ratio {}", ne));
  std::string detail = fmt::format("ne/conv = {:.4f}%", ne * 100);
  for (int m : {3, 8}) {
    const double cs = CostModel{static_cast<double>(m), 1e5}.checksum_ratio(CostedOp::conv_time);
    o.require(std::abs(cs - 1.0 / m) <= 0.01, fmt::format("checksum ratio {} at m={}", cs, m));
    detail += fmt::format(", cs/conv(m={}) = {:.4f}%", m, cs * 100);
  }
  for (int m : {3, 8}) {
    const CodecParams p = derive_params(m, 32);
    const std::size_t n = 1000;
    StreamBlock<std::int32_t> block(p, n);
    const auto rep = run_pipeline(LsbOp::convolution({1, -1, 2}), block, {FixedFailure{0}, Scheme::entangled});
    const std::uint64_t measured = rep.counters.redundancy_ops();
    const std::uint64_t bound = 2ull * m * n;
    o.require(measured <= bound, fmt::format("m={} entangle+disentangle {} adds > 2MN = {}", m, measured, bound));
    detail += fmt::format(", counters(m={}) {}/{}", m, measured, bound);
  }
  o.note(detail);
  return o;
}

Outcome throughput_direction() {
  Outcome o;
  BenchConfig cfg;  // n = 10^6, kernels {100, 1024, 4500}, m {3, 8}, conv, 5 reps
  std::ostringstream log;
  const auto rows = run_bench(cfg, std::cerr);
  for (std::size_t i = 0; i + 2 < rows.size(); i += 3) {
    const BenchRow& ent = rows[i + 1];
    const BenchRow& cs = rows[i + 2];
    o.require(ent.relative_overhead_pct < cs.relative_overhead_pct && ent.relative_overhead_pct <= 0.5 * cs.relative_overhead_pct,
              fmt::format("m={} kernel={}: entangled {:.2f}% vs checksum {:.2f}%", ent.m, ent.kernel,
                          ent.relative_overhead_pct, cs.relative_overhead_pct));
    o.note(fmt::format("m={} K={}: {:.2f}% vs {:.2f}%", ent.m, ent.kernel, ent.relative_overhead_pct,
                       cs.relative_overhead_pct));
  }
  if (!rows.empty()) o.note(fmt::format("n={}", rows.front().n));
  return o;
}

Outcome fail_stop_opacity() {
  Outcome o;
  std::mt19937_64 rng(80);
  std::size_t sweeps = 0;
  for (int m : {3, 8}) {
    const CodecParams p = derive_params(m, 32);
    for (OpKind kind : kAllKinds) {
      const auto [op, bound] = random_op(kind, 128, nent::testing::common_limit(p), rng);
      const auto block = random_block<std::int32_t>(p, 128, bound, rng);
      const auto expected = apply_conventional(op, block);
      for (Scheme scheme : {Scheme::plain, Scheme::entangled, Scheme::checksum}) {
        try {
          const auto reports = sweep_failures(op, block, scheme);
          for (const auto& rep : reports) {
            if (rep.recovered) {
              o.require(rep.outputs == expected, fmt::format("{} {} m={}", to_string(scheme), to_string(kind), m));
            } else {
              // Plain runs lose the failed stream; the survivors must be untouched.
              for (std::size_t s = 0; s < block.streams(); ++s) {
                if (s == rep.missing_stream) continue;
                o.require(std::ranges::equal(rep.outputs.stream(s), expected.stream(s)), "plain survivor changed");
              }
            }
          }
          o.require(scheme == Scheme::plain || std::ranges::all_of(reports, [](const auto& r) { return r.recovered; }),
                    "redundant scheme reported unrecovered");
          ++sweeps;
        } catch (const std::exception& e) {
          o.require(false, e.what());
        }
      }
    }
  }
  o.note(fmt::format("{} sweeps with poisoned failed buffers", sweeps));
  return o;
}

struct Criterion {
  const char* id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"AC1", "reference parameter table", 1, table_reproduction},
      {"AC2", "roundtrip exactness", 30, roundtrip},
      {"AC3", "exhaustive 8-bit oracle", 60, exhaustive_small_word},
      {"AC4", "homomorphism suite", 60, homomorphism},
      {"AC5", "checksum baseline equivalence", 60, checksum_equivalence},
      {"AC6", "cost-model ratios and counters", 10, cost_ratios},
      {"AC7", "throughput direction", 900, throughput_direction},
      {"AC8", "fail-stop opacity", 30, fail_stop_opacity},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(secs <= c.budget_s, fmt::format("took {:.1f} s, budget {:.0f} s", secs, c.budget_s));
    if (!o.pass) ++failures;
    fmt::print("[{}] {} {} ({:.2f} s): {}\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", std::size(criteria) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
