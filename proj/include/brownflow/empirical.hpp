#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "brownflow/linalg.hpp"
#include "brownflow/spectra.hpp"

// Empirical eigenvalue measures and their comparison with analytic
// densities: histograms, radial CDFs, KS-style sup distances, bin-wise L1
// distances and a chi-square uniformity test.
namespace brownflow::spectra {

/// Equal point masses 1/count at each point.
struct EmpiricalMeasure {
  std::vector<Complex> points;

  double weight() const { return points.empty() ? 0.0 : 1.0 / static_cast<double>(points.size()); }
  double total_mass() const { return weight() * static_cast<double>(points.size()); }
};

/// Throws DomainError for an empty spectrum.
EmpiricalMeasure empirical_measure(const Spectrum& s);

struct Histogram1D {
  std::vector<double> edges;   // bins + 1 strictly increasing edges
  std::vector<double> masses;  // mass per bin
  double below = 0.0;          // mass left of edges.front()
  double above = 0.0;          // mass at or right of edges.back()

  std::size_t bins() const { return masses.size(); }
  double in_range_mass() const;
};

struct Histogram2D {
  std::vector<double> x_edges;
  std::vector<double> y_edges;
  std::vector<double> masses;  // row-major: masses[ix * ny + iy]
  double outside = 0.0;

  std::size_t nx() const { return x_edges.empty() ? 0 : x_edges.size() - 1; }
  std::size_t ny() const { return y_edges.empty() ? 0 : y_edges.size() - 1; }
  double at(std::size_t ix, std::size_t iy) const { return masses[ix * ny() + iy]; }
};

/// Uniform bins on [lo, hi); each sample carries mass 1/samples.size().
Histogram1D histogram_1d(const std::vector<double>& samples, double lo, double hi,
                         std::size_t bins = 40);

/// Uniform bins over the data range padded by 5% on each side.
Histogram1D histogram_1d(const std::vector<double>& samples, std::size_t bins = 40);

Histogram2D histogram_2d(const EmpiricalMeasure& em, double x_lo, double x_hi, double y_lo,
                         double y_hi, std::size_t nx = 80, std::size_t ny = 80);

/// Bins over the bounding box of the points padded by 5%.
Histogram2D histogram_2d(const EmpiricalMeasure& em, std::size_t nx = 80, std::size_t ny = 80);

/// Right-continuous nondecreasing step function on [0, inf).
class StepCdf {
 public:
  /// `values` need not be sorted; each carries mass 1/values.size().
  explicit StepCdf(std::vector<double> values);

  double operator()(double r) const;
  const std::vector<double>& jumps() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

/// CDF of |z - center| under the empirical measure.
StepCdf radial_cdf(const EmpiricalMeasure& em, Complex center = {});

/// arg(map(z)) in (-pi, pi] for each point.
std::vector<double> angular_pushforward(const EmpiricalMeasure& em,
                                        const std::function<Complex(Complex)>& map);

/// Kolmogorov-Smirnov sup distance between a step CDF and a continuous
/// analytic CDF, evaluated on both sides of every jump.
double distance_sup_cdf(const StepCdf& empirical, const std::function<double(double)>& analytic);

/// Sum over bins of |bin mass - expected mass|.
double distance_l1_bins(const Histogram1D& h, const std::vector<double>& expected_masses);

/// As above with expected masses from integrating `density` over each bin
/// by 10-point Gauss-Legendre quadrature.
double distance_l1_bins(const Histogram1D& h, const std::function<double(double)>& density);

/// 2D analogue with an 8x8-point tensor Gauss-Legendre rule per cell.
double distance_l1_bins(const Histogram2D& h,
                        const std::function<double(double, double)>& density);

struct ChiSquareResult {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
};

/// Pearson chi-square test of observed counts against expected counts.
/// `constraints` is subtracted from the number of cells to give the degrees
/// of freedom (1 for a single multinomial with known probabilities).
ChiSquareResult chi_square(const std::vector<double>& observed,
                           const std::vector<double>& expected, int constraints = 1);

}  // namespace brownflow::spectra
