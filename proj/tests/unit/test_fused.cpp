// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "nent/fused.hpp"
#include "support.hpp"

namespace nent {
namespace {

using testing::random_block;

template <Sample T>
void matches_pipeline(int m, int w, std::size_t n, std::size_t taps, OpKind kind, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const CodecParams p = derive_params(m, w);
  auto g = testing::random_taps(taps, 4, rng);
  const LsbOp op = kind == OpKind::circular_convolution ? LsbOp::convolution(g) : LsbOp::correlation(g);
  const std::uint64_t gain = std::max<std::uint64_t>(1, worst_case_output(op, 1));
  const auto bound = static_cast<std::int64_t>(static_cast<std::uint64_t>(testing::common_limit(p)) / gain);
  const auto block = random_block<T>(p, n, bound, rng);
  const auto expected = apply_conventional(op, block);

  for (Scheme scheme : {Scheme::plain, Scheme::entangled, Scheme::checksum}) {
    const std::size_t workers = worker_count(scheme, m);
    for (std::size_t r = 0; r <= workers; ++r) {
      const FailedIndex failed = r < workers ? FailedIndex{r} : std::nullopt;
      StreamBlock<T> out(p, n);
      run_window_op(op, block, scheme, failed, out);
      FailureSpec spec{NoFailure{}, scheme};
      if (failed) spec.mode = FixedFailure{*failed};
      const auto report = run_pipeline(op, block, spec);
      ASSERT_EQ(out, report.outputs) << to_string(scheme) << " r=" << r << " n=" << n << " K=" << taps;
      if (report.recovered) {
        ASSERT_EQ(out, expected);
      }
    }
  }
}

TEST(TiledWindowOp, MatchesPipelineAcrossShapes) {
  std::uint64_t seed = 1;
  for (OpKind kind : {OpKind::circular_convolution, OpKind::cross_correlation}) {
    for (int m : {3, 4, 8}) {
      matches_pipeline<std::int32_t>(m, 32, 1, 1, kind, seed++);
      matches_pipeline<std::int32_t>(m, 32, 5, 5, kind, seed++);
      matches_pipeline<std::int32_t>(m, 32, 100, 37, kind, seed++);
      matches_pipeline<std::int32_t>(m, 32, 2048, 3, kind, seed++);
      matches_pipeline<std::int32_t>(m, 32, 5000, 2100, kind, seed++);
    }
  }
}

TEST(TiledWindowOp, OtherWordWidths) {
  matches_pipeline<std::int16_t>(3, 16, 3000, 4, OpKind::circular_convolution, 90);
  matches_pipeline<std::int64_t>(5, 64, 3000, 17, OpKind::cross_correlation, 91);
  matches_pipeline<std::int64_t>(16, 64, 700, 9, OpKind::circular_convolution, 92);
}

TEST(TiledWindowOp, RejectsInadmissibleInput) {
  const CodecParams p = derive_params(3, 32);
  StreamBlock<std::int32_t> block(p, 4096);
  StreamBlock<std::int32_t> out(p, 4096);
  const auto op = LsbOp::convolution({1, 1, 1, 1});
  block(2, 3000) = static_cast<std::int32_t>(output_range(p).hi / 4 + 1);
  try {
    run_window_op(op, block, Scheme::entangled, std::nullopt, out);
    FAIL() << "expected a range error";
  } catch (const RangeError& e) {
    EXPECT_EQ(e.stream(), 2u);
    EXPECT_EQ(e.position(), 3000u);
    EXPECT_EQ(e.bound(), output_range(p).hi / 4);
  }
  EXPECT_NO_THROW(run_window_op(op, block, Scheme::checksum, std::nullopt, out));
}

TEST(TiledWindowOp, RejectsBadArguments) {
  const CodecParams p = derive_params(3, 32);
  StreamBlock<std::int32_t> block(p, 16);
  StreamBlock<std::int32_t> out(p, 16);
  StreamBlock<std::int32_t> short_out(p, 8);
  EXPECT_THROW(run_window_op(LsbOp::scale(2), block, Scheme::plain, std::nullopt, out), ShapeError);
  EXPECT_THROW(run_window_op(LsbOp::convolution({1}), block, Scheme::plain, std::nullopt, short_out), ShapeError);
  EXPECT_THROW(run_window_op(LsbOp::convolution({1}), block, Scheme::entangled, 3, out), ParameterError);
  EXPECT_NO_THROW(run_window_op(LsbOp::convolution({1}), block, Scheme::checksum, 3, out));
}

}  // namespace
}  // namespace nent
