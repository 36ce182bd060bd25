#include "brownflow/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "brownflow/empirical.hpp"
#include "brownflow/error.hpp"

namespace brownflow::checks {

namespace {

constexpr double kPi = std::numbers::pi;

void require_points(std::size_t count, const char* what) {
  if (count == 0) {
    throw DomainError(std::string(what) + ": no points");
  }
}

double fraction(std::size_t hits, std::size_t total) {
  return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace

bool Metric::passed() const {
  switch (relation) {
    case Relation::LessThan:
      return value < threshold;
    case Relation::AtLeast:
      return value >= threshold;
    case Relation::GreaterThan:
      return value > threshold;
  }
  return false;
}

bool CheckResult::passed() const {
  return std::all_of(metrics.begin(), metrics.end(), [](const Metric& m) { return m.passed(); });
}

std::string to_string(Relation r) {
  switch (r) {
    case Relation::LessThan:
      return "<";
    case Relation::AtLeast:
      return ">=";
    case Relation::GreaterThan:
      return ">";
  }
  return "?";
}

CheckResult semicircle_law(const std::vector<double>& values, double max_l1) {
  require_points(values.size(), "semicircle_law");
  const auto h = spectra::histogram_1d(values, -2.2, 2.2, 40);
  const double l1 = spectra::distance_l1_bins(h, analytic::semicircle_density);
  CheckResult r{"semicircle", {{"l1_distance", l1, Relation::LessThan, max_l1}}, {}};
  r.info.emplace_back("points", static_cast<double>(values.size()));
  r.info.emplace_back("mass_outside", h.below + h.above);
  return r;
}

CheckResult circular_law(const std::vector<Complex>& points, double t, double min_inside,
                         double max_ks) {
  require_points(points.size(), "circular_law");
  const double radius = 1.02 * std::sqrt(t);
  const auto inside = std::count_if(points.begin(), points.end(),
                                    [radius](Complex z) { return std::abs(z) <= radius; });
  const spectra::EmpiricalMeasure em{points};
  const double ks = spectra::distance_sup_cdf(
      spectra::radial_cdf(em), [t](double r) { return std::min(1.0, r * r / t); });
  return {"circular",
          {{"inside_fraction", fraction(static_cast<std::size_t>(inside), points.size()),
            Relation::AtLeast, min_inside},
           {"radial_ks", ks, Relation::LessThan, max_ks}},
          {{"points", static_cast<double>(points.size())}}};
}

CheckResult sigma_membership(const std::vector<Complex>& points, double t, double slack,
                             double min_fraction) {
  require_points(points.size(), "sigma_membership");
  const auto hits = std::count_if(points.begin(), points.end(), [&](Complex z) {
    return analytic::T_lambda(z) < t + slack;
  });
  const auto strict = std::count_if(points.begin(), points.end(),
                                    [&](Complex z) { return analytic::in_sigma(t, z); });
  CheckResult r{"sigma",
                {{"fraction_T_below_t_plus_slack",
                  fraction(static_cast<std::size_t>(hits), points.size()), Relation::AtLeast,
                  min_fraction}},
                {}};
  r.info.emplace_back("fraction_in_sigma", fraction(static_cast<std::size_t>(strict), points.size()));
  return r;
}

CheckResult unitary_support(const std::vector<Complex>& points, double t, double slack,
                            double min_fraction) {
  require_points(points.size(), "unitary_support");
  const double bound = analytic::biane_support(t).theta_max + slack;
  const auto hits = std::count_if(points.begin(), points.end(),
                                  [bound](Complex z) { return std::abs(std::arg(z)) <= bound; });
  double worst = 0.0;
  for (const Complex& z : points) {
    worst = std::max(worst, std::abs(std::abs(z) - 1.0));
  }
  CheckResult r{"unitary-support",
                {{"fraction_within_support", fraction(static_cast<std::size_t>(hits), points.size()),
                  Relation::AtLeast, min_fraction}},
                {}};
  r.info.emplace_back("support_theta_max", analytic::biane_support(t).theta_max);
  r.info.emplace_back("max_modulus_defect", worst);
  return r;
}

CheckResult pushforward_support(const std::vector<Complex>& points,
                                const analytic::SigmaDomain& domain, double slack,
                                double min_fraction) {
  require_points(points.size(), "pushforward_support");
  const double theta_max = analytic::biane_support(domain.t()).theta_max;
  const double bound = theta_max + slack;
  std::size_t hits = 0;
  std::size_t used = 0;
  std::vector<bool> filled(36, false);
  for (const Complex& z : points) {
    if (z == Complex{}) {
      continue;
    }
    ++used;
    const double a = std::arg(analytic::phi_t_extended(domain, z));
    if (std::abs(a) <= bound) {
      ++hits;
    }
    const auto bin = std::min<std::size_t>(35, static_cast<std::size_t>((a + kPi) / (2.0 * kPi) * 36.0));
    filled[bin] = true;
  }
  require_points(used, "pushforward_support");
  CheckResult r{"pushforward",
                {{"fraction_within_support", fraction(hits, used), Relation::AtLeast, min_fraction}},
                {}};
  r.info.emplace_back("support_theta_max", theta_max);
  r.info.emplace_back("angular_coverage",
                      fraction(static_cast<std::size_t>(std::count(filled.begin(), filled.end(), true)),
                               filled.size()));
  return r;
}

CheckResult log_bands(const std::vector<Complex>& points, const analytic::SigmaDomain& domain,
                      int slices, int bands, double min_p) {
  require_points(points.size(), "log_bands");
  if (slices < 1 || bands < 2) {
    throw std::invalid_argument("log_bands: need slices >= 1 and bands >= 2");
  }
  std::vector<double> counts(static_cast<std::size_t>(slices * bands), 0.0);
  std::size_t inside = 0;
  for (const Complex& z : points) {
    if (z == Complex{}) {
      continue;
    }
    const double theta = std::arg(z);
    const auto ro = domain.r_outer(theta);
    const auto ri = domain.r_inner(theta);
    if (!ro || !ri || !(*ro > *ri)) {
      continue;
    }
    const double u = (std::log(std::abs(z)) - std::log(*ri)) / (std::log(*ro) - std::log(*ri));
    if (!(u >= 0.0 && u < 1.0)) {
      continue;
    }
    ++inside;
    const int slice = std::min(slices - 1, static_cast<int>((theta + kPi) / (2.0 * kPi) * slices));
    const int band = std::min(bands - 1, static_cast<int>(u * bands));
    counts[static_cast<std::size_t>(slice * bands + band)] += 1.0;
  }
  std::vector<double> observed;
  std::vector<double> expected;
  int used_slices = 0;
  for (int s = 0; s < slices; ++s) {
    double total = 0.0;
    for (int b = 0; b < bands; ++b) total += counts[static_cast<std::size_t>(s * bands + b)];
    if (total / bands < 5.0) {
      continue;
    }
    ++used_slices;
    for (int b = 0; b < bands; ++b) {
      observed.push_back(counts[static_cast<std::size_t>(s * bands + b)]);
      expected.push_back(total / bands);
    }
  }
  if (used_slices == 0) {
    throw DomainError("log_bands: too few points inside Sigma_t for a band test");
  }
  const auto chi = spectra::chi_square(observed, expected, used_slices);
  CheckResult r{"log-bands", {{"chi_square_p_value", chi.p_value, Relation::GreaterThan, min_p}}, {}};
  r.info.emplace_back("chi_square", chi.statistic);
  r.info.emplace_back("degrees_of_freedom", chi.degrees_of_freedom);
  r.info.emplace_back("fraction_inside", fraction(inside, points.size()));
  r.info.emplace_back("slices_used", used_slices);
  return r;
}

CheckResult unit_circle_ring(const std::vector<Complex>& points, double max_median) {
  require_points(points.size(), "unit_circle_ring");
  std::vector<double> d;
  d.reserve(points.size());
  for (const Complex& z : points) d.push_back(std::abs(std::abs(z) - 1.0));
  const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  double median = *mid;
  if (d.size() % 2 == 0) {
    median = 0.5 * (median + *std::max_element(d.begin(), mid));
  }
  return {"ring", {{"median_modulus_defect", median, Relation::LessThan, max_median}}, {}};
}

}  // namespace brownflow::checks
