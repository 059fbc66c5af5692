// SPDX-License-Identifier: Apache-2.0

#include "nent/cli.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "nent/bench.hpp"
#include "nent/checksum.hpp"
#include "nent/cost_model.hpp"
#include "nent/entanglement.hpp"
#include "nent/lsb_ops.hpp"
#include "nent/pipeline.hpp"
#include "nent/stream_file.hpp"

namespace nent::cli {
namespace {

constexpr int kTable1[] = {3, 4, 5, 8, 11, 16, 32};

class UsageError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Argument parsing helpers

std::vector<std::int64_t> parse_ints(std::string_view text, char sep) {
  std::vector<std::int64_t> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(sep, pos), text.size());
    std::string_view item = text.substr(pos, end - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
      throw UsageError("not an integer: '" + std::string(item) + "'");
    }
    values.push_back(v);
    pos = end + 1;
  }
  return values;
}

// Kernel text: a path to a stream file, or inline comma-separated integers
// (GEMM rows separated by ';').
struct KernelSource {
  std::vector<std::vector<std::int64_t>> rows;
};

KernelSource load_kernel(const std::string& spec) {
  KernelSource src;
  if (spec.empty()) throw UsageError("--kernel is required for this operation");
  if (std::filesystem::is_regular_file(spec)) {
    const StreamFile file = read_stream_file(std::filesystem::path(spec));
    for (std::uint32_t i = 0; i < file.m; ++i) {
      const auto s = file.stream(i);
      src.rows.emplace_back(s.begin(), s.end());
    }
    return src;
  }
  std::string_view text = spec;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(';', pos), text.size());
    src.rows.push_back(parse_ints(text.substr(pos, end - pos), ','));
    pos = end + 1;
  }
  return src;
}

std::vector<std::int64_t> single_row(const KernelSource& k, OpKind kind) {
  if (k.rows.size() != 1) {
    throw UsageError(std::string(to_string(kind)) + " kernel must be a single vector");
  }
  return k.rows.front();
}

LsbOp make_op(OpKind kind, const std::string& kernel_spec) {
  const KernelSource k = load_kernel(kernel_spec);
  switch (kind) {
    case OpKind::elementwise_add: return LsbOp::add(single_row(k, kind));
    case OpKind::elementwise_sub: return LsbOp::sub(single_row(k, kind));
    case OpKind::elementwise_mul: return LsbOp::mul(single_row(k, kind));
    case OpKind::inner_product: return LsbOp::inner_product(single_row(k, kind));
    case OpKind::circular_convolution: return LsbOp::convolution(single_row(k, kind));
    case OpKind::cross_correlation: return LsbOp::correlation(single_row(k, kind));
    case OpKind::scale: {
      const auto row = single_row(k, kind);
      if (row.size() != 1) throw UsageError("scale takes a single integer kernel");
      return LsbOp::scale(row.front());
    }
    case OpKind::permutation: {
      std::vector<std::size_t> index;
      for (std::int64_t v : single_row(k, kind)) {
        if (v < 0) throw UsageError("permutation indices must be non-negative");
        index.push_back(static_cast<std::size_t>(v));
      }
      return LsbOp::permutation(std::move(index));
    }
    case OpKind::row_gemm: {
      Matrix g;
      g.rows = k.rows.size();
      g.cols = k.rows.front().size();
      for (const auto& row : k.rows) {
        if (row.size() != g.cols) throw UsageError("gemm kernel rows have unequal lengths");
        g.values.insert(g.values.end(), row.begin(), row.end());
      }
      return LsbOp::row_gemm(std::move(g));
    }
  }
  throw UsageError("unknown operation");
}

OpKind parse_kind(const std::string& name) {
  const auto kind = parse_op_kind(name);
  if (!kind) throw UsageError("unknown --op '" + name + "'");
  return *kind;
}

FailureMode parse_fail(const std::string& text) {
  if (text.empty() || text == "none") return NoFailure{};
  if (text.rfind("random:", 0) == 0) {
    const auto v = parse_ints(std::string_view(text).substr(7), ',');
    if (v.size() != 1) throw UsageError("--fail random:<seed> takes one seed");
    return RandomFailure{static_cast<std::uint64_t>(v.front())};
  }
  const auto v = parse_ints(text, ',');
  if (v.size() != 1 || v.front() < 0) throw UsageError("--fail takes <index|random:<seed>|none>");
  return FixedFailure{static_cast<std::size_t>(v.front())};
}

// ---------------------------------------------------------------------------
// params

void print_param_rows(const std::vector<int>& ms, int w, std::ostream& out) {
  fmt::print(out, "{:>4} {:>4} {:>4} {:>10} {:>9}\n", "M", "l", "k", "entangled", "checksum");
  for (int m : ms) {
    const CodecParams p = derive_params(m, w);
    fmt::print(out, "{:>4} {:>4} {:>4} {:>10} {:>9}\n", m, p.l, p.k, p.output_bitwidth(),
               checksum_bitwidth(m, w));
  }
}

// ---------------------------------------------------------------------------
// run

struct RunArgs {
  std::string in;
  std::string out;
  std::string op;
  std::string kernel;
  std::string scheme = "entangled";
  std::string fail = "none";
};

template <Sample T>
int run_typed(const RunArgs& args, const StreamFile& file, std::ostream& out, std::ostream& err) {
  const CodecParams p = derive_params(static_cast<int>(file.m), file.w);
  std::vector<T> data(file.values.size());
  std::transform(file.values.begin(), file.values.end(), data.begin(),
                 [](std::int64_t v) { return static_cast<T>(v); });
  const StreamBlock<T> block(p, static_cast<std::size_t>(file.n), std::move(data));

  const LsbOp op = make_op(parse_kind(args.op), args.kernel);
  const auto scheme = parse_scheme(args.scheme);
  if (!scheme) throw UsageError("unknown --scheme '" + args.scheme + "'");
  const FailureSpec spec{parse_fail(args.fail), *scheme};

  const RunReport<T> report = run_pipeline(op, block, spec);
  const auto& c = report.counters;
  fmt::print(out, "scheme={} m={} n={} n_out={} failed_worker={} recovered={}\n", to_string(*scheme),
             p.m, file.n, report.outputs.samples(),
             report.failed_worker ? std::to_string(*report.failed_worker) : "none",
             report.recovered ? "yes" : "no");
  fmt::print(out, "encode_ops={} op_ops={} decode_ops={} shifts={}\n", c.encode_ops, c.op_ops,
             c.decode_ops, c.shifts);
  if (report.missing_stream) throw UnrecoverableError(*report.missing_stream);

  StreamFile result;
  result.w = file.w;
  result.m = file.m;
  result.n = report.outputs.samples();
  result.values.assign(report.outputs.values().begin(), report.outputs.values().end());
  if (!args.out.empty()) write_stream_file(std::filesystem::path(args.out), result);
  (void)err;
  return kOk;
}

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  if (args.in.empty()) throw UsageError("--in is required");
  if (args.op.empty()) throw UsageError("--op is required");
  const StreamFile file = read_stream_file(std::filesystem::path(args.in));
  switch (file.w) {
    case 16: return run_typed<std::int16_t>(args, file, out, err);
    case 32: return run_typed<std::int32_t>(args, file, out, err);
    default: return run_typed<std::int64_t>(args, file, out, err);
  }
}

// ---------------------------------------------------------------------------
// cost

struct CostArgs {
  std::string op = "conv";
  std::size_t n = 1000;
  int m = 3;
  int w = 32;
  std::string kernel;
  std::uint64_t seed = 1;
};

std::string pct(double ratio) { return fmt::format("{:.4f}%", ratio * 100.0); }

int cmd_cost(const CostArgs& args, std::ostream& out) {
  const OpKind kind = parse_kind(args.op);
  const bool gemm = kind == OpKind::row_gemm;
  if (!gemm && kind != OpKind::circular_convolution && kind != OpKind::cross_correlation) {
    throw UsageError("cost supports conv, xcorr and gemm");
  }
  if (args.n == 0) throw UsageError("--n must be positive");
  const CostModel model{static_cast<double>(args.m), static_cast<double>(args.n)};

  fmt::print(out, "op={} m={} n={}\n", to_string(kind), args.m, args.n);
  if (gemm) {
    fmt::print(out, "C_GEMM            = {:.6g}\n", model.gemm());
    fmt::print(out, "C_ne,GEMM         = {:.6g}\n", model.ne_gemm());
    fmt::print(out, "C_cs,GEMM         = {:.6g}\n", model.cs_gemm());
    fmt::print(out, "entangled/op      = {}\n", pct(model.entanglement_ratio(CostedOp::gemm)));
    fmt::print(out, "checksum/op       = {}\n", pct(model.checksum_ratio(CostedOp::gemm)));
  } else {
    fmt::print(out, "C_conv,time       = {:.6g}\n", model.conv_time());
    fmt::print(out, "C_conv,freq       = {:.6g}\n", model.conv_freq());
    fmt::print(out, "C_ne,conv         = {:.6g}\n", model.ne_conv());
    fmt::print(out, "C_cs,conv,time    = {:.6g}\n", model.cs_conv_time());
    fmt::print(out, "C_cs,conv,freq    = {:.6g}\n", model.cs_conv_freq());
    fmt::print(out, "entangled/time    = {}\n", pct(model.entanglement_ratio(CostedOp::conv_time)));
    fmt::print(out, "entangled/freq    = {}\n", pct(model.entanglement_ratio(CostedOp::conv_freq)));
    fmt::print(out, "checksum/time     = {}\n", pct(model.checksum_ratio(CostedOp::conv_time)));
    fmt::print(out, "checksum/freq     = {}\n", pct(model.checksum_ratio(CostedOp::conv_freq)));
  }

  // Instrumented run. GEMM runs one row of length n against an n x n matrix,
  // so its redundancy count is compared with 2 M n rather than 2 M n^2.
  constexpr std::size_t kMaxGemmN = 2048;
  if (gemm && args.n > kMaxGemmN) {
    fmt::print(out, "measured: skipped (gemm instrumented run limited to n <= {})\n", kMaxGemmN);
    return kOk;
  }
  const CodecParams p = derive_params(args.m, args.w);
  std::mt19937_64 rng(args.seed);
  LsbOp op = LsbOp::scale(1);
  if (!args.kernel.empty()) {
    op = make_op(kind, args.kernel);
  } else if (gemm) {
    Matrix g{args.n, args.n, std::vector<std::int64_t>(args.n * args.n, 0)};
    for (std::size_t i = 0; i < args.n; ++i) g.values[i * args.n + (i * 7 + 3) % args.n] = 1;
    op = LsbOp::row_gemm(std::move(g));
  } else {
    std::vector<std::int64_t> g(std::min<std::size_t>(args.n, 16));
    std::uniform_int_distribution<int> tap(-3, 3);
    for (auto& v : g) v = tap(rng);
    op = kind == OpKind::cross_correlation ? LsbOp::correlation(g) : LsbOp::convolution(g);
  }
  const std::uint64_t per_unit = std::max<std::uint64_t>(1, worst_case_output(op, 1));
  const auto limit = static_cast<std::uint64_t>(std::min(output_range(p).hi, checksum_range(p.m, p.w).hi));
  const auto bound = static_cast<std::int64_t>(limit / per_unit);
  std::uniform_int_distribution<std::int64_t> sample(-bound, bound);
  StreamBlock<std::int64_t> block(p, args.n);
  for (auto& v : block.values()) v = sample(rng);

  const double bound_ne = 2.0 * args.m * static_cast<double>(args.n);
  for (Scheme scheme : {Scheme::entangled, Scheme::checksum}) {
    const auto report = run_pipeline(op, block, FailureSpec{FixedFailure{0}, scheme});
    const auto& c = report.counters;
    fmt::print(out, "measured {}: encode_ops={} op_ops={} decode_ops={} redundancy/op={}\n",
               to_string(scheme), c.encode_ops, c.op_ops, c.decode_ops,
               c.op_ops == 0 ? std::string("n/a") : pct(static_cast<double>(c.redundancy_ops()) / c.op_ops));
    if (scheme == Scheme::entangled) {
      const double factor = static_cast<double>(c.redundancy_ops()) / bound_ne;
      fmt::print(out, "measured entangled redundancy / 2MN = {:.4f}\n", factor);
      if (factor > kCostDisagreementFactor) {
        fmt::print(out, "WARNING: measured redundancy exceeds 2MN by more than {}x\n",
                   kCostDisagreementFactor);
      }
    }
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// selftest

struct SelftestCase {
  const char* name;
  std::function<bool()> check;
};

template <Sample T>
StreamBlock<T> random_block(const CodecParams& p, std::size_t n, std::int64_t bound, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> dist(-bound, bound);
  StreamBlock<T> block(p, n);
  for (T& v : block.values()) v = static_cast<T>(dist(rng));
  return block;
}

int cmd_selftest(std::uint64_t seed, std::ostream& out) {
  std::mt19937_64 rng(seed);
  const std::vector<SelftestCase> cases = {
      {"table1",
       [] {
         const int expected[][3] = {{11, 10, 21}, {8, 8, 24}, {7, 4, 25}, {4, 4, 28},
                                    {3, 2, 29},   {2, 2, 30}, {1, 1, 31}};
         for (std::size_t i = 0; i < std::size(kTable1); ++i) {
           const CodecParams p = derive_params(kTable1[i], 32);
           if (p.l != expected[i][0] || p.k != expected[i][1] || p.output_bitwidth() != expected[i][2]) return false;
         }
         return true;
       }},
      {"roundtrip",
       [&] {
         for (int m : kTable1) {
           const CodecParams p = derive_params(m, 32);
           const auto block = random_block<std::int32_t>(p, 512, input_range(p).hi, rng);
           const auto eps = entangle(block);
           for (std::size_t r = 0; r < p.streams(); ++r) {
             if (!(disentangle(eps, r) == block)) return false;
           }
         }
         return true;
       }},
      {"homomorphism",
       [&] {
         const CodecParams p = derive_params(3, 32);
         const auto op = LsbOp::convolution({1, -2, 3, 1});
         const auto block = random_block<std::int32_t>(p, 64, output_range(p).hi / 7, rng);
         const auto expected = apply_conventional(op, block);
         for (std::size_t r = 0; r < 3; ++r) {
           if (!(disentangle(apply_entangled(op, entangle(block)), r) == expected)) return false;
         }
         return true;
       }},
      {"checksum",
       [&] {
         const CodecParams p = derive_params(4, 32);
         const auto op = LsbOp::add({5});
         const auto block = random_block<std::int32_t>(p, 64, 1000, rng);
         const auto expected = apply_conventional(op, block);
         const auto processed = checksum_apply(op, checksum_encode(block));
         for (std::size_t r = 0; r <= 4; ++r) {
           if (!(checksum_recover(processed, r) == expected)) return false;
         }
         return true;
       }},
  };
  bool all = true;
  for (const auto& c : cases) {
    bool ok = false;
    try {
      ok = c.check();
    } catch (const std::exception&) {
      ok = false;
    }
    all = all && ok;
    fmt::print(out, "[{}] {}\n", ok ? "PASS" : "FAIL", c.name);
  }
  return all ? kOk : kSelftestFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fail-stop tolerant integer stream processing", "nent"};
  app.require_subcommand(1);

  std::vector<int> param_ms;
  int param_w = 32;
  bool table1 = false;
  auto* params = app.add_subcommand("params", "Print entanglement parameters per stream count");
  params->add_option("--m", param_ms, "Stream counts")->delimiter(',');
  params->add_option("--w", param_w, "Word width in bits");
  params->add_flag("--table1", table1, "Print the reference rows M = 3, 4, 5, 8, 11, 16, 32");

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Process a stream file under a fault-tolerance scheme");
  run_cmd->add_option("--in", run_args.in, "Input stream file");
  run_cmd->add_option("--out", run_args.out, "Output stream file");
  run_cmd->add_option("--op", run_args.op, "add|sub|mul|scale|dot|conv|xcorr|perm|gemm");
  run_cmd->add_option("--kernel", run_args.kernel, "Kernel stream file or inline integers");
  run_cmd->add_option("--scheme", run_args.scheme, "plain|entangled|checksum");
  run_cmd->add_option("--fail", run_args.fail, "<index|random:<seed>|none>");

  BenchConfig bench;
  std::string bench_op = "conv";
  std::string bench_csv;
  auto* bench_cmd = app.add_subcommand("bench", "Throughput of plain, entangled and checksum schemes");
  bench_cmd->add_option("--op", bench_op, "conv|xcorr");
  bench_cmd->add_option("--n", bench.n, "Samples per stream");
  bench_cmd->add_option("--kernel-sizes", bench.kernel_sizes, "Kernel lengths")->delimiter(',');
  bench_cmd->add_option("--m", bench.ms, "Stream counts")->delimiter(',');
  bench_cmd->add_option("--w", bench.w, "Word width in bits");
  bench_cmd->add_option("--reps", bench.reps, "Timed repetitions (median reported)");
  bench_cmd->add_option("--seed", bench.seed, "Data seed");
  bench_cmd->add_option("--csv", bench_csv, "CSV output path (stdout if omitted)");

  CostArgs cost;
  auto* cost_cmd = app.add_subcommand("cost", "Closed-form and measured operation counts");
  cost_cmd->add_option("--op", cost.op, "conv|xcorr|gemm");
  cost_cmd->add_option("--n", cost.n, "Samples per stream");
  cost_cmd->add_option("--m", cost.m, "Stream count");
  cost_cmd->add_option("--w", cost.w, "Word width in bits");
  cost_cmd->add_option("--kernel", cost.kernel, "Kernel for the instrumented run");
  cost_cmd->add_option("--seed", cost.seed, "Data seed");

  std::uint64_t selftest_seed = 1;
  auto* selftest = app.add_subcommand("selftest", "Quick correctness checks");
  selftest->add_option("--seed", selftest_seed, "Data seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (params->parsed()) {
      if (table1) param_ms.assign(std::begin(kTable1), std::end(kTable1));
      if (param_ms.empty()) throw UsageError("params needs --m or --table1");
      print_param_rows(param_ms, param_w, out);
      return kOk;
    }
    if (run_cmd->parsed()) return cmd_run(run_args, out, err);
    if (bench_cmd->parsed()) {
      bench.op = parse_kind(bench_op);
      const auto rows = run_bench(bench, err);
      if (bench_csv.empty()) {
        write_bench_csv(out, rows);
      } else {
        std::ofstream file(bench_csv);
        if (!file) throw UsageError("cannot open " + bench_csv);
        write_bench_csv(file, rows);
      }
      return kOk;
    }
    if (cost_cmd->parsed()) return cmd_cost(cost, out);
    if (selftest->parsed()) return cmd_selftest(selftest_seed, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ShapeError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const RangeError& e) {
    err << "error: range rejection: " << e.what() << "\n";
    return kRangeRejected;
  } catch (const UnrecoverableError& e) {
    err << "error: " << e.what() << "\n";
    return kUnrecoverable;
  } catch (const FormatError& e) {
    err << "error: malformed file: " << e.what() << "\n";
    return kMalformedFile;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kInfeasibleParams;
  }
  return kUsage;
}

}  // namespace nent::cli
