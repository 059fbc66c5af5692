// SPDX-License-Identifier: Apache-2.0

#include "nent/cost_model.hpp"

#include <cmath>

namespace nent {

std::string_view to_string(CostedOp op) noexcept {
  switch (op) {
    case CostedOp::gemm: return "gemm";
    case CostedOp::conv_time: return "conv_time";
    case CostedOp::conv_freq: return "conv_freq";
  }
  return "?";
}

double CostModel::gemm() const noexcept { return m * n * n * n; }
double CostModel::conv_time() const noexcept { return 4 * m * n * n; }
double CostModel::conv_freq() const noexcept {
  return m * ((45 * n + 15) * std::log2(3 * n + 1) + 3 * n + 1);
}

double CostModel::ne_conv() const noexcept { return 2 * m * n; }
double CostModel::ne_gemm() const noexcept { return 2 * m * n * n; }

double CostModel::cs_gemm() const noexcept { return 2 * m * n * n + gemm() / m; }
double CostModel::cs_conv_time() const noexcept { return 2 * m * n + conv_time() / m; }
double CostModel::cs_conv_freq() const noexcept { return 2 * m * n + conv_freq() / m; }

double CostModel::operation(CostedOp op) const noexcept {
  switch (op) {
    case CostedOp::gemm: return gemm();
    case CostedOp::conv_time: return conv_time();
    case CostedOp::conv_freq: return conv_freq();
  }
  return 0;
}

double CostModel::entanglement(CostedOp op) const noexcept {
  return op == CostedOp::gemm ? ne_gemm() : ne_conv();
}

double CostModel::checksum(CostedOp op) const noexcept {
  switch (op) {
    case CostedOp::gemm: return cs_gemm();
    case CostedOp::conv_time: return cs_conv_time();
    case CostedOp::conv_freq: return cs_conv_freq();
  }
  return 0;
}

}  // namespace nent
