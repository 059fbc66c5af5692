// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "nent/error.hpp"
#include "nent/params.hpp"

namespace nent {
namespace {

struct Row {
  int m, l, k, bits, checksum_bits;
};

constexpr Row kTable[] = {
    {3, 11, 10, 21, 30}, {4, 8, 8, 24, 30}, {5, 7, 4, 25, 29}, {8, 4, 4, 28, 29},
    {11, 3, 2, 29, 28},  {16, 2, 2, 30, 28}, {32, 1, 1, 31, 27},
};

TEST(Params, ReferenceTableAt32Bits) {
  for (const Row& row : kTable) {
    SCOPED_TRACE(row.m);
    const CodecParams p = derive_params(row.m, 32);
    EXPECT_EQ(p.l, row.l);
    EXPECT_EQ(p.k, row.k);
    EXPECT_EQ(p.output_bitwidth(), row.bits);
    EXPECT_EQ(checksum_bitwidth(row.m, 32), row.checksum_bits);
  }
}

// Brute force over every (l, k) pair: nothing feasible beats the derived
// bitwidth, and no smaller l reaches it.
TEST(Params, DerivedChoiceIsOptimal) {
  for (int w : {8, 16, 24, 32, 48, 64}) {
    for (int m = 3; m <= w; ++m) {
      const CodecParams got = derive_params(m, w);
      ASSERT_NO_THROW(validate(got));
      for (int l = 1; l < w; ++l) {
        for (int k = 1; k <= l; ++k) {
          if ((m - 1) * l + k > w) continue;
          const int bits = (m - 2) * l + k;
          EXPECT_LE(bits, got.output_bitwidth()) << "m=" << m << " w=" << w;
          if (bits == got.output_bitwidth()) {
            EXPECT_GE(l, got.l);
          }
        }
      }
    }
  }
}

TEST(Params, ChecksumBitwidthIsCeilLog2) {
  for (int m = 1; m <= 100; ++m) {
    const int expected = 32 - static_cast<int>(std::ceil(std::log2(static_cast<double>(m))));
    EXPECT_EQ(checksum_bitwidth(m, 32), expected) << m;
  }
}

TEST(Params, OutputRangeExamples) {
  EXPECT_EQ(output_range({4, 32, 8, 8}).hi, 8323072);
  EXPECT_EQ(output_range({8, 32, 4, 4}).hi, 117440512);
  EXPECT_EQ(output_range({8, 32, 4, 4}).lo, -117440512);
  // Three streams use 2^(l+k-1) - 2^l.
  EXPECT_EQ(output_range({3, 32, 11, 10}).hi, (1 << 20) - (1 << 11));
  EXPECT_EQ(input_range({3, 32, 11, 10}), output_range({3, 32, 11, 10}));
}

// The general-M expression evaluated at M = 3 differs from the three-stream
// bound whenever k != l; both stay below the largest value the fields hold.
TEST(Params, ThreeStreamBoundVersusGeneralExpression) {
  const CodecParams p{3, 32, 11, 10};
  const std::int64_t general = (std::int64_t{1} << p.k) * ((std::int64_t{1} << (p.l - 1)) - 1);
  EXPECT_EQ(general, 1047552);
  EXPECT_NE(output_range(p).hi, general);
  const std::int64_t field_max = (std::int64_t{1} << (p.l + p.k - 1)) - 1;
  EXPECT_LT(output_range(p).hi, field_max);
  EXPECT_LT(general, field_max);
}

TEST(Params, DegenerateRangeCollapsesToZero) {
  const CodecParams p = derive_params(3, 4);
  EXPECT_EQ(p.l, 1);
  EXPECT_EQ(p.k, 1);
  EXPECT_EQ(output_range(p).hi, 0);
  EXPECT_TRUE(output_range(p).contains(0));
  EXPECT_FALSE(output_range(p).contains(1));
  EXPECT_EQ(output_range(derive_params(32, 32)).hi, 0);
}

TEST(Params, RejectsInfeasibleConfigurations) {
  EXPECT_THROW(derive_params(2, 32), ParameterError);
  EXPECT_THROW(derive_params(33, 32), ParameterError);
  EXPECT_THROW(derive_params(3, 65), ParameterError);
  EXPECT_THROW(validate({3, 32, 11, 11}), ParameterError);  // 2*11 + 11 > 32
  EXPECT_THROW(validate({3, 32, 4, 5}), ParameterError);    // k > l
  EXPECT_THROW(validate({3, 32, 4, 0}), ParameterError);
  EXPECT_THROW(checksum_range(1 << 20, 16), ParameterError);
}

TEST(Params, SixteenBitRow) {
  const CodecParams p = derive_params(3, 16);
  EXPECT_EQ(p.l, 5);
  EXPECT_EQ(p.k, 5);
  EXPECT_EQ(p.output_bitwidth(), 10);
  EXPECT_EQ(checksum_bitwidth(3, 16), 14);
}

TEST(Params, WordRange) {
  EXPECT_EQ(word_range(8).hi, 127);
  EXPECT_EQ(word_range(64).hi, INT64_MAX);
  EXPECT_EQ(checksum_range(3, 32).hi, (1 << 29) - 1);
}

}  // namespace
}  // namespace nent
