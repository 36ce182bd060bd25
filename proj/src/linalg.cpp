#include "brownflow/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <lapacke.h>

#include "brownflow/error.hpp"

namespace brownflow::linalg {

namespace {

lapack_complex_double* as_lapack(Complex* p) {
  return reinterpret_cast<lapack_complex_double*>(p);
}

// Backward-error thresholds and coefficients of the [m/m] Pade approximant
// to exp (Higham, SIAM J. Matrix Anal. Appl. 26 (2005)).
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                          25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                           302702400.0,   30270240.0,   2162160.0,
                                           110880.0,      3960.0,       90.0,
                                           1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

// Solves (V - U) R = (V + U) with LAPACK zgesv.
ComplexMatrix pade_quotient(const ComplexMatrix& u, const ComplexMatrix& v) {
  const auto n = static_cast<lapack_int>(u.rows());
  ComplexMatrix lhs = v - u;
  ComplexMatrix rhs = v + u;
  std::vector<lapack_int> ipiv(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_zgesv(LAPACK_COL_MAJOR, n, n, as_lapack(lhs.data()), n,
                                        ipiv.data(), as_lapack(rhs.data()), n);
  if (info != 0) {
    throw NonConvergence("expm: singular Pade denominator (zgesv info=" + std::to_string(info) +
                         ")");
  }
  return rhs;
}

template <std::size_t N>
ComplexMatrix pade_low_degree(const ComplexMatrix& a, const std::array<double, N>& b) {
  const Eigen::Index n = a.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  // Even powers A^0, A^2, A^4, ...
  std::vector<ComplexMatrix> even;
  even.push_back(id);
  const ComplexMatrix a2 = a * a;
  for (std::size_t k = 2; k < N; k += 2) {
    even.push_back(k == 2 ? a2 : ComplexMatrix(even.back() * a2));
  }
  ComplexMatrix odd_sum = ComplexMatrix::Zero(n, n);
  ComplexMatrix even_sum = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k < N; ++k) {
    if (k % 2 == 0) {
      even_sum += b[k] * even[k / 2];
    } else {
      odd_sum += b[k] * even[k / 2];
    }
  }
  const ComplexMatrix u = a * odd_sum;
  return pade_quotient(u, even_sum);
}

ComplexMatrix pade13(const ComplexMatrix& a) {
  const auto& b = kPade13;
  const Eigen::Index n = a.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a2 = a * a;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;
  const ComplexMatrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
                                b[5] * a4 + b[3] * a2 + b[1] * id;
  const ComplexMatrix u = a * u_inner;
  const ComplexMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                          b[4] * a4 + b[2] * a2 + b[0] * id;
  return pade_quotient(u, v);
}

}  // namespace

std::vector<Complex> general_eigenvalues(const ComplexMatrix& m, const std::string& matrix_id) {
  const auto n = static_cast<lapack_int>(m.rows());
  if (m.rows() != m.cols()) {
    throw InvalidDimension("general_eigenvalues: matrix is not square");
  }
  if (n == 0) {
    return {};
  }
  ComplexMatrix work = m;
  std::vector<Complex> w(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, as_lapack(work.data()), n,
                                        as_lapack(w.data()), nullptr, 1, nullptr, 1);
  if (info != 0) {
    throw NonConvergence("eigensolver failed (zgeev info=" + std::to_string(info) +
                         ") for matrix '" + (matrix_id.empty() ? "<unnamed>" : matrix_id) + "'");
  }
  return w;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  const auto n = static_cast<lapack_int>(m.rows());
  if (m.rows() != m.cols()) {
    throw InvalidDimension("hermitian_eigenvalues: matrix is not square");
  }
  if (n == 0) {
    return {};
  }
  ComplexMatrix work = m;
  std::vector<double> w(static_cast<std::size_t>(n));
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, as_lapack(work.data()), n, w.data());
  if (info != 0) {
    throw NonConvergence("Hermitian eigensolver failed (zheevd info=" + std::to_string(info) +
                         ")");
  }
  return w;
}

double spectral_norm_estimate(const ComplexMatrix& a, int iterations) {
  const Eigen::Index n = a.cols();
  if (n == 0) {
    return 0.0;
  }
  // Deterministic, non-symmetric start vector.
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = Complex(1.0 + 0.37 * std::sin(1.3 * static_cast<double>(i)),
                   0.21 * std::cos(0.7 * static_cast<double>(i)));
  }
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const Eigen::VectorXcd av = a * v;
    const double av_norm = av.norm();
    estimate = std::max(estimate, av_norm);
    if (av_norm == 0.0) {
      break;
    }
    Eigen::VectorXcd w = a.adjoint() * av;
    const double w_norm = w.norm();
    if (w_norm == 0.0) {
      break;
    }
    v = w / w_norm;
  }
  return estimate;
}

ComplexMatrix expm(const ComplexMatrix& a, double norm_bound) {
  if (a.rows() != a.cols()) {
    throw InvalidDimension("expm: matrix is not square");
  }
  if (norm_bound <= kTheta3) {
    return pade_low_degree(a, kPade3);
  }
  if (norm_bound <= kTheta5) {
    return pade_low_degree(a, kPade5);
  }
  if (norm_bound <= kTheta7) {
    return pade_low_degree(a, kPade7);
  }
  if (norm_bound <= kTheta9) {
    return pade_low_degree(a, kPade9);
  }
  int squarings = 0;
  if (norm_bound > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm_bound / kTheta13)));
  }
  ComplexMatrix result = pade13(a / std::ldexp(1.0, squarings));
  for (int i = 0; i < squarings; ++i) {
    result = result * result;
  }
  return result;
}

ComplexMatrix expm(const ComplexMatrix& a) {
  return expm(a, 1.25 * spectral_norm_estimate(a));
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace brownflow::linalg
