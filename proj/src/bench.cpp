// SPDX-License-Identifier: Apache-2.0

#include "nent/bench.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <ostream>
#include <random>

#include "nent/fused.hpp"

namespace nent {
namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

template <class F>
double time_seconds(F&& f) {
  const auto start = Clock::now();
  f();
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::size_t available_bytes() {
  const long pages = sysconf(_SC_AVPHYS_PAGES);
  const long page = sysconf(_SC_PAGE_SIZE);
  if (pages <= 0 || page <= 0) return static_cast<std::size_t>(-1);
  return static_cast<std::size_t>(pages) * static_cast<std::size_t>(page);
}

// Preallocated outputs for the three schemes, all driven by the same tiled
// schedule so that only the redundancy work differs between them.
template <Sample T>
class SchemeRunner {
 public:
  SchemeRunner(const LsbOp& op, StreamBlock<T> input)
      : op_(op),
        input_(std::move(input)),
        plain_out_(input_.params(), input_.samples()),
        entangled_out_(input_.params(), input_.samples()),
        checksum_out_(input_.params(), input_.samples()) {}

  void plain() { run_window_op(op_, input_, Scheme::plain, std::nullopt, plain_out_); }
  void entangled() { run_window_op(op_, input_, Scheme::entangled, std::nullopt, entangled_out_); }
  void checksum() { run_window_op(op_, input_, Scheme::checksum, std::nullopt, checksum_out_); }

  void verify() const {
    if (!(entangled_out_ == plain_out_)) throw Error("entangled outputs differ from the plain run");
    if (!(checksum_out_ == plain_out_)) throw Error("checksum outputs differ from the plain run");
    const auto reference = apply_conventional(op_, input_);
    if (!(reference == plain_out_)) throw Error("tiled outputs differ from the conventional operation");
  }

 private:
  LsbOp op_;
  StreamBlock<T> input_;
  StreamBlock<T> plain_out_;
  StreamBlock<T> entangled_out_;
  StreamBlock<T> checksum_out_;
};

template <Sample T>
void bench_case(const BenchConfig& cfg, int m, std::size_t n, std::size_t taps,
                std::vector<BenchRow>& rows, std::ostream& log) {
  const CodecParams p = derive_params(m, cfg.w);
  std::mt19937_64 rng(cfg.seed ^ (static_cast<std::uint64_t>(m) << 32) ^ taps);

  std::vector<std::int64_t> g(taps);
  std::uniform_int_distribution<int> coin(0, 1);
  for (auto& v : g) v = coin(rng) != 0 ? 1 : -1;
  const LsbOp op = cfg.op == OpKind::cross_correlation ? LsbOp::correlation(g) : LsbOp::convolution(g);

  const std::int64_t limit = std::min(output_range(p).hi, checksum_range(p.m, p.w).hi);
  const auto bound = static_cast<std::int64_t>(static_cast<std::uint64_t>(limit) / taps);
  std::uniform_int_distribution<std::int64_t> sample(-bound, bound);
  StreamBlock<T> input(p, n);
  for (T& v : input.values()) v = static_cast<T>(sample(rng));

  SchemeRunner<T> runner(op, std::move(input));
  runner.plain();
  runner.entangled();
  runner.checksum();
  runner.verify();

  // The starting scheme rotates each repetition so a transient slowdown of
  // the machine does not keep landing on the same scheme.
  std::vector<double> t_plain, t_ent, t_cs;
  for (int rep = 0; rep < cfg.reps; ++rep) {
    for (int slot = 0; slot < 3; ++slot) {
      switch ((rep + slot) % 3) {
        case 0: t_plain.push_back(time_seconds([&] { runner.plain(); })); break;
        case 1: t_ent.push_back(time_seconds([&] { runner.entangled(); })); break;
        default: t_cs.push_back(time_seconds([&] { runner.checksum(); })); break;
      }
    }
  }

  const double samples = static_cast<double>(m) * static_cast<double>(n);
  const double thr_plain = samples / median(t_plain);
  const double thr_ent = samples / median(t_ent);
  const double thr_cs = samples / median(t_cs);
  auto loss = [&](double thr) { return (1.0 - thr / thr_plain) * 100.0; };

  rows.push_back({Scheme::plain, m, n, taps, thr_plain, 0.0});
  rows.push_back({Scheme::entangled, m, n, taps, thr_ent, loss(thr_ent)});
  rows.push_back({Scheme::checksum, m, n, taps, thr_cs, loss(thr_cs)});
  fmt::print(log, "m={} kernel={}: plain {:.3e}/s, entangled {:+.2f}%, checksum {:+.2f}%\n", m, taps,
             thr_plain, loss(thr_ent), loss(thr_cs));
}

template <Sample T>
std::vector<BenchRow> run_typed(const BenchConfig& cfg, std::ostream& log) {
  std::vector<BenchRow> rows;
  for (int m : cfg.ms) {
    std::size_t n = cfg.n;
    // Inputs plus one output block per scheme.
    const auto need = [&](std::size_t len) { return 4 * static_cast<std::size_t>(m) * len * sizeof(T); };
    while (n > 1024 && need(n) > available_bytes() / 2) n /= 2;
    if (n != cfg.n) fmt::print(log, "warning: m={} shrinks n from {} to {} to fit memory\n", m, cfg.n, n);
    for (std::size_t taps : cfg.kernel_sizes) {
      if (taps == 0 || taps > n) throw ShapeError("kernel size " + std::to_string(taps) + " must lie in [1, n]");
      bench_case<T>(cfg, m, n, taps, rows, log);
    }
  }
  return rows;
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchConfig& config, std::ostream& log) {
  if (config.op != OpKind::circular_convolution && config.op != OpKind::cross_correlation) {
    throw ShapeError("bench supports conv and xcorr, got " + std::string(to_string(config.op)));
  }
  if (config.reps < 1) throw ParameterError("repetitions must be positive");
  switch (config.w) {
    case 16: return run_typed<std::int16_t>(config, log);
    case 32: return run_typed<std::int32_t>(config, log);
    case 64: return run_typed<std::int64_t>(config, log);
    default: throw ParameterError("bench word width must be 16, 32 or 64");
  }
}

void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows) {
  fmt::print(out, "scheme,m,n,kernel,median_throughput,relative_overhead_pct\n");
  for (const auto& r : rows) {
    fmt::print(out, "{},{},{},{},{:.6e},{:.4f}\n", to_string(r.scheme), r.m, r.n, r.kernel,
               r.median_throughput, r.relative_overhead_pct);
  }
}

}  // namespace nent
