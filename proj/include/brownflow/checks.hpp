#pragma once

#include <string>
#include <vector>

#include "brownflow/brown_analytic.hpp"
#include "brownflow/linalg.hpp"

// Finite-N checks of eigenvalue clouds against the limiting laws. Each check
// returns named metrics with the threshold they were held to.
namespace brownflow::checks {

enum class Relation { LessThan, AtLeast, GreaterThan };

struct Metric {
  std::string name;
  double value = 0.0;
  Relation relation = Relation::LessThan;
  double threshold = 0.0;

  bool passed() const;
};

struct CheckResult {
  std::string check;
  std::vector<Metric> metrics;
  /// Informational numbers that are not held to a threshold.
  std::vector<std::pair<std::string, double>> info;

  bool passed() const;
};

std::string to_string(Relation r);

/// L1 distance between a 40-bin histogram of `values` on [-2.2, 2.2] and the
/// semicircle law, required below `max_l1`.
CheckResult semicircle_law(const std::vector<double>& values, double max_l1 = 0.08);

/// Fraction of points with |z| <= 1.02 sqrt(t) and the sup distance of the
/// radial CDF to min(1, r^2 / t).
CheckResult circular_law(const std::vector<Complex>& points, double t = 1.0,
                         double min_inside = 0.97, double max_ks = 0.05);

/// Fraction of points with T(z) < t + slack.
CheckResult sigma_membership(const std::vector<Complex>& points, double t, double slack = 0.2,
                             double min_fraction = 0.95);

/// Fraction of unitary eigenvalues whose argument lies within Biane's
/// support widened by `slack` radians.
CheckResult unitary_support(const std::vector<Complex>& points, double t, double slack = 0.15,
                            double min_fraction = 0.98);

/// Fraction of points whose image under the extended Phi_t has argument
/// within Biane's support widened by `slack`. Also reports the share of 36
/// equal angular bins that receive at least one point.
CheckResult pushforward_support(const std::vector<Complex>& points,
                                const analytic::SigmaDomain& domain, double slack = 0.1,
                                double min_fraction = 0.95);

/// Horizontal uniformity of log-eigenvalues. Each point inside Sigma_t gets
/// u = (log|z| - log r_inner(theta)) / (log r_outer(theta) - log r_inner(theta))
/// in [0, 1); points are grouped into `slices` equal theta-slices and
/// `bands` equal u-bands, and the band counts of every slice are tested for
/// equality by a chi-square test (one constraint per slice). Slices with
/// fewer than 5 expected points per band are left out.
CheckResult log_bands(const std::vector<Complex>& points, const analytic::SigmaDomain& domain,
                      int slices = 8, int bands = 4, double min_p = 0.01);

/// Median of ||z| - 1| required below `max_median`.
CheckResult unit_circle_ring(const std::vector<Complex>& points, double max_median = 0.1);

}  // namespace brownflow::checks
