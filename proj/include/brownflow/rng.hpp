#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace brownflow {

/// Identifies one deterministic random stream: sample j of a batch seeded
/// with `seed` uses stream_id = j.
struct RngHandle {
  std::uint64_t seed = 42;
  std::uint64_t stream_id = 0;

  RngHandle with_stream(std::uint64_t id) const { return {seed, id}; }
};

// Gaussian variates from a mt19937_64 engine keyed by (seed, stream_id).
// The normal transform is an explicit Box-Muller pair rather than
// std::normal_distribution, whose algorithm is implementation-defined, so
// output is bit-stable across standard libraries.
class GaussianStream {
 public:
  explicit GaussianStream(const RngHandle& handle);

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();

  /// Standard real normal N(0, 1).
  double normal();

  /// Complex Gaussian with E|z|^2 = variance and independent real and
  /// imaginary parts, each of variance variance/2.
  std::complex<double> complex_normal(double variance);

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace brownflow
