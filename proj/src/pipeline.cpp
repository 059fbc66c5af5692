// SPDX-License-Identifier: Apache-2.0

#include "nent/pipeline.hpp"

#include <random>

namespace nent {

std::string_view to_string(Scheme scheme) noexcept {
  switch (scheme) {
    case Scheme::plain: return "plain";
    case Scheme::entangled: return "entangled";
    case Scheme::checksum: return "checksum";
  }
  return "?";
}

std::optional<Scheme> parse_scheme(std::string_view name) noexcept {
  for (Scheme s : {Scheme::plain, Scheme::entangled, Scheme::checksum}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

std::size_t worker_count(Scheme scheme, int m) {
  const auto streams = static_cast<std::size_t>(m);
  return scheme == Scheme::checksum ? streams + 1 : streams;
}

std::optional<std::size_t> resolve_failure(const FailureSpec& spec, int m) {
  const std::size_t workers = worker_count(spec.scheme, m);
  if (const auto* fixed = std::get_if<FixedFailure>(&spec.mode)) {
    if (fixed->worker >= workers) {
      throw ParameterError("failure index " + std::to_string(fixed->worker) + " out of range for " +
                           std::to_string(workers) + " workers");
    }
    return fixed->worker;
  }
  if (const auto* random = std::get_if<RandomFailure>(&spec.mode)) {
    std::mt19937_64 rng(random->seed);
    std::uniform_int_distribution<std::size_t> pick(0, workers - 1);
    return pick(rng);
  }
  return std::nullopt;
}

RangeBound scheme_limit(Scheme scheme, const CodecParams& p) {
  switch (scheme) {
    case Scheme::plain: return word_range(p.w);
    case Scheme::entangled: return output_range(p);
    case Scheme::checksum: return checksum_range(p.m, p.w);
  }
  return {};
}

}  // namespace nent
