#include "brownflow/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "brownflow/error.hpp"

namespace brownflow::spectra {

namespace {

void require_positive_x(double x, const char* what) {
  if (!(x > 0.0)) {
    throw DomainError(std::string(what) + ": regularizer x must be > 0");
  }
}

// Eigenvalues of (A - lambda)^*(A - lambda) with roundoff negatives clamped.
std::vector<double> shifted_gram_eigenvalues(const ComplexMatrix& a, Complex lambda) {
  const Eigen::Index n = a.rows();
  ComplexMatrix shifted = a;
  shifted.diagonal().array() -= lambda;
  const ComplexMatrix gram = shifted.adjoint() * shifted;
  std::vector<double> sigma = linalg::hermitian_eigenvalues(gram);
  const double scale = sigma.empty() ? 0.0 : std::max(1.0, sigma.back());
  const double floor = -1e-12 * scale;
  for (double& v : sigma) {
    if (v < 0.0) {
      if (v < floor) {
        throw NonConvergence("negative eigenvalue " + std::to_string(v) +
                             " of a Gram matrix beyond the roundoff floor (n=" +
                             std::to_string(n) + ")");
      }
      v = 0.0;
    }
  }
  return sigma;
}

}  // namespace

Spectrum eigenvalues(const ComplexMatrix& m, const std::string& matrix_id) {
  Spectrum out;
  out.n = static_cast<int>(m.rows());
  out.eigenvalues = linalg::general_eigenvalues(m, matrix_id);
  const Complex trace = m.trace();
  const Complex sum = std::accumulate(out.eigenvalues.begin(), out.eigenvalues.end(), Complex{});
  if (std::abs(sum - trace) > 1e-8 * (1.0 + std::abs(trace))) {
    throw NonConvergence("eigenvalue sum deviates from the trace for matrix '" +
                         (matrix_id.empty() ? std::string("<unnamed>") : matrix_id) + "'");
  }
  return out;
}

LogDetValues regularized_log_det(const ComplexMatrix& a, Complex lambda, double x) {
  require_positive_x(x, "regularized_log_det");
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw InvalidDimension("regularized_log_det: matrix must be square and non-empty");
  }
  const std::vector<double> sigma = shifted_gram_eigenvalues(a, lambda);
  LogDetValues out;
  for (double v : sigma) {
    out.s += std::log(v + x);
    out.resolvent_trace += 1.0 / (v + x);
  }
  const auto n = static_cast<double>(sigma.size());
  out.s /= n;
  out.resolvent_trace /= n;
  return out;
}

double s_function_matrix(const ComplexMatrix& a, Complex lambda, double x) {
  return regularized_log_det(a, lambda, x).s;
}

double resolvent_trace(const ComplexMatrix& a, Complex lambda, double x) {
  return regularized_log_det(a, lambda, x).resolvent_trace;
}

void MeanVar::add(double value) {
  ++count;
  const double delta = value - mean;
  mean += delta / static_cast<double>(count);
  m2 += delta * (value - mean);
}

void MeanVar::merge(const MeanVar& other) {
  if (other.count == 0) {
    return;
  }
  if (count == 0) {
    *this = other;
    return;
  }
  const double total = static_cast<double>(count + other.count);
  const double delta = other.mean - mean;
  mean += delta * static_cast<double>(other.count) / total;
  m2 += other.m2 + delta * delta * static_cast<double>(count) *
                       static_cast<double>(other.count) / total;
  count += other.count;
}

double MeanVar::variance() const {
  return count < 2 ? 0.0 : m2 / static_cast<double>(count - 1);
}

RegularizedLogDet monte_carlo_S(const ensembles::BmPathSpec& spec, Complex lambda, double x,
                                int samples, const RngHandle& rng) {
  spec.validate();
  require_positive_x(x, "monte_carlo_S");
  if (samples < 2) {
    throw std::invalid_argument("monte_carlo_S: need at least 2 samples");
  }
  MeanVar s_acc;
  MeanVar trace_acc;
  for (int j = 0; j < samples; ++j) {
    const ComplexMatrix m =
        ensembles::sample_bm_endpoint(spec, rng.with_stream(static_cast<std::uint64_t>(j)));
    const LogDetValues v = regularized_log_det(m, lambda, x);
    s_acc.add(v.s);
    trace_acc.add(v.resolvent_trace);
  }
  RegularizedLogDet out;
  out.t = spec.t_final;
  out.lambda = lambda;
  out.x = x;
  out.s_mean = s_acc.mean;
  out.s_var = s_acc.variance();
  out.resolvent_trace_mean = trace_acc.mean;
  out.resolvent_trace_var = trace_acc.variance();
  out.samples = s_acc.count;
  return out;
}

}  // namespace brownflow::spectra
