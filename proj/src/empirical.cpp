#include "brownflow/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include "brownflow/error.hpp"

namespace brownflow::spectra {

namespace {

std::vector<double> uniform_edges(double lo, double hi, std::size_t bins) {
  if (bins == 0) {
    throw std::invalid_argument("histogram: need at least one bin");
  }
  if (!(hi > lo)) {
    throw std::invalid_argument("histogram: upper edge must exceed lower edge");
  }
  std::vector<double> edges(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  }
  edges.back() = hi;
  return edges;
}

// Bin index for uniform edges, or -1 / bins when outside.
std::ptrdiff_t locate(double v, const std::vector<double>& edges) {
  const double lo = edges.front();
  const double hi = edges.back();
  const auto bins = static_cast<std::ptrdiff_t>(edges.size() - 1);
  if (v < lo) {
    return -1;
  }
  if (!(v < hi)) {
    return bins;
  }
  auto idx = static_cast<std::ptrdiff_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
  return std::clamp<std::ptrdiff_t>(idx, 0, bins - 1);
}

std::pair<double, double> padded_range(double lo, double hi) {
  double width = hi - lo;
  if (!(width > 0.0)) {
    width = std::max(1.0, std::abs(lo)) * 1e-6;
  }
  return {lo - 0.05 * width, hi + 0.05 * width};
}

}  // namespace

EmpiricalMeasure empirical_measure(const Spectrum& s) {
  if (s.eigenvalues.empty()) {
    throw DomainError("empirical_measure: empty spectrum");
  }
  return EmpiricalMeasure{s.eigenvalues};
}

double Histogram1D::in_range_mass() const {
  return std::accumulate(masses.begin(), masses.end(), 0.0);
}

Histogram1D histogram_1d(const std::vector<double>& samples, double lo, double hi,
                         std::size_t bins) {
  if (samples.empty()) {
    throw DomainError("histogram_1d: no samples");
  }
  Histogram1D h;
  h.edges = uniform_edges(lo, hi, bins);
  h.masses.assign(bins, 0.0);
  const double w = 1.0 / static_cast<double>(samples.size());
  for (double v : samples) {
    const std::ptrdiff_t idx = locate(v, h.edges);
    if (idx < 0) {
      h.below += w;
    } else if (idx >= static_cast<std::ptrdiff_t>(bins)) {
      h.above += w;
    } else {
      h.masses[static_cast<std::size_t>(idx)] += w;
    }
  }
  return h;
}

Histogram1D histogram_1d(const std::vector<double>& samples, std::size_t bins) {
  if (samples.empty()) {
    throw DomainError("histogram_1d: no samples");
  }
  const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  const auto [lo, hi] = padded_range(*mn, *mx);
  return histogram_1d(samples, lo, hi, bins);
}

Histogram2D histogram_2d(const EmpiricalMeasure& em, double x_lo, double x_hi, double y_lo,
                         double y_hi, std::size_t nx, std::size_t ny) {
  if (em.points.empty()) {
    throw DomainError("histogram_2d: empty measure");
  }
  Histogram2D h;
  h.x_edges = uniform_edges(x_lo, x_hi, nx);
  h.y_edges = uniform_edges(y_lo, y_hi, ny);
  h.masses.assign(nx * ny, 0.0);
  const double w = em.weight();
  for (const Complex& z : em.points) {
    const std::ptrdiff_t ix = locate(z.real(), h.x_edges);
    const std::ptrdiff_t iy = locate(z.imag(), h.y_edges);
    if (ix < 0 || iy < 0 || ix >= static_cast<std::ptrdiff_t>(nx) ||
        iy >= static_cast<std::ptrdiff_t>(ny)) {
      h.outside += w;
    } else {
      h.masses[static_cast<std::size_t>(ix) * ny + static_cast<std::size_t>(iy)] += w;
    }
  }
  return h;
}

Histogram2D histogram_2d(const EmpiricalMeasure& em, std::size_t nx, std::size_t ny) {
  if (em.points.empty()) {
    throw DomainError("histogram_2d: empty measure");
  }
  double x_min = em.points.front().real();
  double x_max = x_min;
  double y_min = em.points.front().imag();
  double y_max = y_min;
  for (const Complex& z : em.points) {
    x_min = std::min(x_min, z.real());
    x_max = std::max(x_max, z.real());
    y_min = std::min(y_min, z.imag());
    y_max = std::max(y_max, z.imag());
  }
  const auto [xl, xh] = padded_range(x_min, x_max);
  const auto [yl, yh] = padded_range(y_min, y_max);
  return histogram_2d(em, xl, xh, yl, yh, nx, ny);
}

StepCdf::StepCdf(std::vector<double> values) : sorted_(std::move(values)) {
  if (sorted_.empty()) {
    throw DomainError("StepCdf: no values");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double StepCdf::operator()(double r) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), r);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

StepCdf radial_cdf(const EmpiricalMeasure& em, Complex center) {
  std::vector<double> radii;
  radii.reserve(em.points.size());
  for (const Complex& z : em.points) {
    radii.push_back(std::abs(z - center));
  }
  return StepCdf(std::move(radii));
}

std::vector<double> angular_pushforward(const EmpiricalMeasure& em,
                                        const std::function<Complex(Complex)>& map) {
  std::vector<double> angles;
  angles.reserve(em.points.size());
  for (const Complex& z : em.points) {
    angles.push_back(std::arg(map(z)));
  }
  return angles;
}

double distance_sup_cdf(const StepCdf& empirical, const std::function<double(double)>& analytic) {
  const auto& v = empirical.jumps();
  const auto n = static_cast<double>(v.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = analytic(v[i]);
    const double before = static_cast<double>(i) / n;
    const double after = static_cast<double>(i + 1) / n;
    sup = std::max({sup, std::abs(f - before), std::abs(f - after)});
  }
  return sup;
}

double distance_l1_bins(const Histogram1D& h, const std::vector<double>& expected_masses) {
  if (expected_masses.size() != h.masses.size()) {
    throw std::invalid_argument("distance_l1_bins: bin count mismatch (" +
                                std::to_string(h.masses.size()) + " vs " +
                                std::to_string(expected_masses.size()) + ")");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < h.masses.size(); ++i) {
    total += std::abs(h.masses[i] - expected_masses[i]);
  }
  return total;
}

double distance_l1_bins(const Histogram1D& h, const std::function<double(double)>& density) {
  if (h.edges.size() != h.masses.size() + 1) {
    throw std::invalid_argument("distance_l1_bins: malformed histogram");
  }
  std::vector<double> expected(h.masses.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    expected[i] = boost::math::quadrature::gauss<double, 10>::integrate(density, h.edges[i],
                                                                        h.edges[i + 1]);
  }
  return distance_l1_bins(h, expected);
}

double distance_l1_bins(const Histogram2D& h,
                        const std::function<double(double, double)>& density) {
  using rule = boost::math::quadrature::gauss<double, 8>;
  if (h.masses.size() != h.nx() * h.ny()) {
    throw std::invalid_argument("distance_l1_bins: malformed 2D histogram");
  }
  double total = 0.0;
  for (std::size_t ix = 0; ix < h.nx(); ++ix) {
    for (std::size_t iy = 0; iy < h.ny(); ++iy) {
      const double y0 = h.y_edges[iy];
      const double y1 = h.y_edges[iy + 1];
      const double expected = rule::integrate(
          [&](double x) {
            return rule::integrate([&](double y) { return density(x, y); }, y0, y1);
          },
          h.x_edges[ix], h.x_edges[ix + 1]);
      total += std::abs(h.at(ix, iy) - expected);
    }
  }
  return total;
}

ChiSquareResult chi_square(const std::vector<double>& observed,
                           const std::vector<double>& expected, int constraints) {
  if (observed.size() != expected.size() || observed.empty()) {
    throw std::invalid_argument("chi_square: observed/expected size mismatch");
  }
  ChiSquareResult out;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!(expected[i] > 0.0)) {
      throw std::invalid_argument("chi_square: expected counts must be positive");
    }
    const double d = observed[i] - expected[i];
    out.statistic += d * d / expected[i];
  }
  out.degrees_of_freedom = static_cast<int>(observed.size()) - constraints;
  if (out.degrees_of_freedom < 1) {
    throw std::invalid_argument("chi_square: no degrees of freedom left");
  }
  const boost::math::chi_squared dist(out.degrees_of_freedom);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  return out;
}

}  // namespace brownflow::spectra
