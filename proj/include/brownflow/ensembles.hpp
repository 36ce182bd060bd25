#pragma once

#include <string_view>
#include <vector>

#include "brownflow/linalg.hpp"
#include "brownflow/rng.hpp"

// Samplers for the Gaussian ensembles (GUE, Ginibre) and for matrix Brownian
// motions built from them: the additive Ginibre Brownian motion and the
// multiplicative Brownian motions on U(n) and GL(n; C).
//
// Normalization: every entry has variance 1/n, so the GUE spectrum fills
// [-2, 2] and the Ginibre spectrum fills the unit disk as n grows.
namespace brownflow::ensembles {

enum class BmKind { AdditiveGinibre, Unitary, GeneralLinear };

std::string_view to_string(BmKind kind);
BmKind bm_kind_from_string(std::string_view name);

/// Default number of product/increment steps for a path of length t:
/// 100 per unit time, at least 1.
int default_steps(double t_final);

struct BmPathSpec {
  BmKind kind = BmKind::GeneralLinear;
  int n = 1;
  double t_final = 1.0;
  int steps = 100;

  /// Throws InvalidDimension unless n >= 1, steps >= 1 and t_final >= 0.
  /// t_final = 0 is accepted and gives the starting point of the motion.
  void validate() const;
};

ComplexMatrix sample_gue(int n, const RngHandle& rng);
ComplexMatrix sample_ginibre(int n, const RngHandle& rng);

/// Path of the additive Ginibre Brownian motion at times j * t_final / k for
/// j = 1..k, built from independent increments of entrywise variance
/// (t_final / k) / n.
std::vector<ComplexMatrix> sample_ginibre_bm(const BmPathSpec& spec, const RngHandle& rng);

/// Endpoint of sample_ginibre_bm without storing the path; bitwise equal to
/// sample_ginibre_bm(spec, rng).back().
ComplexMatrix ginibre_bm_endpoint(const BmPathSpec& spec, const RngHandle& rng);

/// Brownian motion on U(n) at time t_final as the ordered product of k
/// factors exp(i sqrt(t/k) H_j) with H_j independent GUE matrices.
ComplexMatrix sample_unitary_bm(const BmPathSpec& spec, const RngHandle& rng);

struct GlSample {
  ComplexMatrix value;
  /// Reciprocal condition estimate of `value` (1-norm, from LU).
  double rcond = 1.0;
  /// Set when the product is singular to working precision; callers should
  /// resample rather than use the matrix.
  bool resample_warning = false;
};

/// Brownian motion on GL(n; C) at time t_final as the ordered product of k
/// factors exp(sqrt(t/k) Z_j) with Z_j independent Ginibre matrices.
GlSample sample_gl_bm(const BmPathSpec& spec, const RngHandle& rng);

/// Dispatches on spec.kind and returns the matrix at time t_final.
ComplexMatrix sample_bm_endpoint(const BmPathSpec& spec, const RngHandle& rng);

/// n x n matrix with ones on the first superdiagonal.
ComplexMatrix nilpotent(int n);

/// nilpotent(n) + epsilon * Ginibre(n).
ComplexMatrix nilpotent_plus_noise(int n, double epsilon, const RngHandle& rng);

}  // namespace brownflow::ensembles
