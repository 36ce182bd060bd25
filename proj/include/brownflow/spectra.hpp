#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "brownflow/ensembles.hpp"
#include "brownflow/linalg.hpp"
#include "brownflow/rng.hpp"

namespace brownflow::spectra {

/// Eigenvalues with algebraic multiplicity.
struct Spectrum {
  int n = 0;
  std::vector<Complex> eigenvalues;
};

/// Dense non-Hermitian eigensolve. Verifies that the eigenvalues sum to the
/// trace within 1e-8 * (1 + |trace|) and throws NonConvergence (naming
/// `matrix_id`) when the solver fails or the check does not hold.
Spectrum eigenvalues(const ComplexMatrix& m, const std::string& matrix_id = {});

/// Both normalized traces from a single Hermitian eigendecomposition of
/// (A - lambda)^* (A - lambda):
///   s     = (1/n) sum log(sigma_i + x)
///   trace = (1/n) sum 1 / (sigma_i + x)
struct LogDetValues {
  double s = 0.0;
  double resolvent_trace = 0.0;
};

LogDetValues regularized_log_det(const ComplexMatrix& a, Complex lambda, double x);

/// (1/n) trace log((A - lambda)^* (A - lambda) + x). Requires x > 0.
double s_function_matrix(const ComplexMatrix& a, Complex lambda, double x);

/// (1/n) trace ((A - lambda)^* (A - lambda) + x)^{-1}; the x-derivative of
/// s_function_matrix. Requires x > 0.
double resolvent_trace(const ComplexMatrix& a, Complex lambda, double x);

/// Running mean and second central moment (Welford) with an associative
/// merge, so per-sample results can be reduced in any grouping.
struct MeanVar {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double value);
  void merge(const MeanVar& other);
  /// Unbiased sample variance; 0 for fewer than two samples.
  double variance() const;
};

/// Monte Carlo estimate of S^{lambda,N}(t, x) and of the resolvent trace
/// T^{lambda,N} over independent draws of the motion described by `spec`
/// at time spec.t_final. Sample j uses stream rng.with_stream(j).
struct RegularizedLogDet {
  double t = 0.0;
  Complex lambda;
  double x = 0.0;
  double s_mean = 0.0;
  double s_var = 0.0;
  double resolvent_trace_mean = 0.0;
  double resolvent_trace_var = 0.0;
  std::size_t samples = 0;
};

RegularizedLogDet monte_carlo_S(const ensembles::BmPathSpec& spec, Complex lambda, double x,
                                int samples, const RngHandle& rng);

}  // namespace brownflow::spectra
