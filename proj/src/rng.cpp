#include "brownflow/rng.hpp"

#include <cmath>
#include <numbers>

namespace brownflow {

namespace {

std::seed_seq make_seed_seq(const RngHandle& h) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  return std::seed_seq{lo(h.seed), hi(h.seed), lo(h.stream_id), hi(h.stream_id),
                       0x9e3779b9u};
}

}  // namespace

GaussianStream::GaussianStream(const RngHandle& handle) {
  auto seq = make_seed_seq(handle);
  engine_.seed(seq);
}

double GaussianStream::uniform() {
  // (k + 0.5) / 2^53 never hits 0 or 1.
  const std::uint64_t k = engine_() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double GaussianStream::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

std::complex<double> GaussianStream::complex_normal(double variance) {
  const double scale = std::sqrt(variance / 2.0);
  const double re = normal();
  const double im = normal();
  return {re * scale, im * scale};
}

}  // namespace brownflow
