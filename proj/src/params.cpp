// SPDX-License-Identifier: Apache-2.0

#include "nent/params.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "nent/error.hpp"

namespace nent {
namespace {

std::string describe(int m, int w) {
  return "m=" + std::to_string(m) + ", w=" + std::to_string(w);
}

std::int64_t pow2(int e) { return std::int64_t{1} << e; }

}  // namespace

void validate(const CodecParams& p) {
  if (p.m < 3) throw ParameterError("stream count must be >= 3 (" + describe(p.m, p.w) + ")");
  if (p.w < 2 || p.w > 64) throw ParameterError("word width must lie in [2, 64] (" + describe(p.m, p.w) + ")");
  if (p.k < 1 || p.k > p.l) {
    throw ParameterError("need 1 <= k <= l, got l=" + std::to_string(p.l) +
                         ", k=" + std::to_string(p.k));
  }
  if ((p.m - 1) * p.l + p.k > p.w) {
    throw ParameterError("(m-1)*l + k exceeds the word width (" + describe(p.m, p.w) +
                         ", l=" + std::to_string(p.l) + ", k=" + std::to_string(p.k) + ")");
  }
}

CodecParams derive_params(int m, int w) {
  if (m < 3 || w > 64 || w < m) {
    throw ParameterError("no feasible (l, k) for " + describe(m, w));
  }
  CodecParams best{m, w, 0, 0};
  int best_bits = -1;
  for (int l = 1; (m - 1) * l + 1 <= w; ++l) {
    const int k = std::min(l, w - (m - 1) * l);
    const int bits = (m - 2) * l + k;
    if (bits > best_bits) {
      best_bits = bits;
      best.l = l;
      best.k = k;
    }
  }
  return best;
}

RangeBound output_range(const CodecParams& p) {
  validate(p);
  std::int64_t bound = 0;
  if (p.m == 3) {
    bound = pow2(p.l + p.k - 1) - pow2(p.l);
  } else {
    bound = pow2((p.m - 3) * p.l + p.k) * (pow2(p.l - 1) - 1);
  }
  return RangeBound::symmetric(bound);
}

RangeBound input_range(const CodecParams& p) { return output_range(p); }

int checksum_bitwidth(int m, int w) {
  if (m < 1) throw ParameterError("stream count must be positive (" + describe(m, w) + ")");
  const int extra = std::bit_width(static_cast<unsigned>(m - 1));  // ceil(log2 m)
  const int bits = w - extra;
  if (bits < 2) throw ParameterError("checksum leaves no data bits (" + describe(m, w) + ")");
  return bits;
}

RangeBound checksum_range(int m, int w) {
  return RangeBound::symmetric(pow2(checksum_bitwidth(m, w) - 1) - 1);
}

RangeBound word_range(int w) {
  if (w < 2 || w > 64) throw ParameterError("word width must lie in [2, 64]");
  const std::uint64_t hi = (std::uint64_t{1} << (w - 1)) - 1;
  return RangeBound::symmetric(static_cast<std::int64_t>(hi));
}

}  // namespace nent
