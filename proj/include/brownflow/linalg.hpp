#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace brownflow {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

namespace linalg {

/// Eigenvalues of a general complex matrix (LAPACK zgeev, no vectors).
/// Throws NonConvergence mentioning `matrix_id` if the QR iteration fails.
std::vector<Complex> general_eigenvalues(const ComplexMatrix& m,
                                         const std::string& matrix_id = {});

/// Ascending eigenvalues of a Hermitian matrix; only the lower triangle is read.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

/// Largest singular value estimated by power iteration on A*A. The result is
/// a lower bound that is typically within a few percent after 20 iterations.
double spectral_norm_estimate(const ComplexMatrix& a, int iterations = 20);

/// Matrix exponential by diagonal Pade approximation with scaling and
/// squaring. Degree selection uses `norm_bound` (any consistent norm of `a`)
/// against the backward-error thresholds for degrees 3..13. For
/// skew-Hermitian input the diagonal Pade quotient is exactly unitary, so the
/// result stays on U(n) up to rounding.
ComplexMatrix expm(const ComplexMatrix& a, double norm_bound);

/// expm with norm_bound = 1.25 * spectral_norm_estimate(a).
ComplexMatrix expm(const ComplexMatrix& a);

/// max_ij |M_ij|
double max_abs(const ComplexMatrix& m);

}  // namespace linalg
}  // namespace brownflow
