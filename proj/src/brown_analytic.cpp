#include "brownflow/brown_analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>

#include "brownflow/error.hpp"

namespace brownflow::analytic {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive_t(double t, const char* what) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError(std::string(what) + ": t must be finite and > 0");
  }
}

// Polynomial in s^2 with the given coefficients (constant term first).
template <std::size_t N>
double even_series(const std::array<double, N>& c, double s2) {
  double acc = 0.0;
  for (std::size_t i = N; i-- > 0;) {
    acc = acc * s2 + c[i];
  }
  return acc;
}

// s / sinh(s), (cosh(s) - h) / s^2 and (h cosh(s) - 1) / s^2 as series in s^2.
constexpr std::array<double, 7> kH = {1.0,
                                      -1.0 / 6.0,
                                      7.0 / 360.0,
                                      -31.0 / 15120.0,
                                      127.0 / 604800.0,
                                      -73.0 / 3421440.0,
                                      1414477.0 / 653837184000.0};
constexpr std::array<double, 7> kA = {2.0 / 3.0,
                                      1.0 / 45.0,
                                      13.0 / 3780.0,
                                      -1.0 / 5400.0,
                                      647.0 / 29937600.0,
                                      -176639.0 / 81729648000.0,
                                      2867.0 / 13076743680.0};
constexpr std::array<double, 7> kB = {1.0 / 3.0,
                                      -1.0 / 45.0,
                                      2.0 / 945.0,
                                      -1.0 / 4725.0,
                                      2.0 / 93555.0,
                                      -1382.0 / 638512875.0,
                                      4.0 / 18243225.0};

constexpr double kSeriesWindow = 0.1;

struct Reduced {
  double h, a, b;  // h, alpha / (2 r s^2), beta / (2 r s^2)
};

Reduced reduced_hab(double s) {
  if (std::abs(s) < kSeriesWindow) {
    const double s2 = s * s;
    return {even_series(kH, s2), even_series(kA, s2), even_series(kB, s2)};
  }
  const double h = s / std::sinh(s);
  const double c = std::cosh(s);
  const double s2 = s * s;
  return {h, (c - h) / s2, (h * c - 1.0) / s2};
}

double wrap_angle(double theta) {
  if (theta > -kPi && theta <= kPi) {
    return theta;
  }
  double w = std::remainder(theta, 2.0 * kPi);
  if (w <= -kPi) {
    w += 2.0 * kPi;
  }
  return w;
}

double ray_excess(double t, double r, double theta) {
  return T_lambda(std::polar(r, theta)) - t;
}

// Bisection to adjacent doubles on a bracket with g(lo) < 0 < g(hi) (or the
// reverse when `increasing` is false).
template <class G>
double bisect(G&& g, double lo, double hi, bool increasing) {
  for (int i = 0; i < 2000; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) {
      break;
    }
    const bool below = g(mid) < 0.0;
    if (below == increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// min over r > 0 of T(r e^{i theta}), searching in s = log r.
double min_along_ray(double theta) {
  std::uintmax_t max_iter = 500;
  const auto res = boost::math::tools::brent_find_minima(
      [theta](double s) { return T_lambda(std::polar(std::exp(s), theta)); }, -6.0, 6.0,
      std::numeric_limits<double>::digits / 2, max_iter);
  return res.second;
}

}  // namespace

double semicircle_density(double x) {
  if (!(std::abs(x) < 2.0)) {
    return 0.0;
  }
  return std::sqrt(4.0 - x * x) / (2.0 * kPi);
}

double semicircle_cdf(double x) {
  if (x <= -2.0) {
    return 0.0;
  }
  if (x >= 2.0) {
    return 1.0;
  }
  return 0.5 + (x * std::sqrt(4.0 - x * x) / 4.0 + std::asin(x / 2.0)) / kPi;
}

double circular_s_inside(double t, Complex lambda) {
  require_positive_t(t, "circular_s_inside");
  return std::log(t) - 1.0 + std::norm(lambda) / t;
}

double circular_s_outside(Complex lambda) {
  if (lambda == Complex{}) {
    throw DomainError("circular_s_outside: lambda = 0");
  }
  return std::log(std::norm(lambda));
}

double circular_s(double t, Complex lambda) {
  require_positive_t(t, "circular_s");
  return std::norm(lambda) >= t ? circular_s_outside(lambda) : circular_s_inside(t, lambda);
}

double circular_s_dr_inside(double t, double r) {
  require_positive_t(t, "circular_s_dr_inside");
  return 2.0 * r / t;
}

double circular_s_dr_outside(double r) {
  if (!(r > 0.0)) {
    throw DomainError("circular_s_dr_outside: r must be > 0");
  }
  return 2.0 / r;
}

double circular_brown_density(double t, Complex lambda) {
  require_positive_t(t, "circular_brown_density");
  return std::norm(lambda) < t ? 1.0 / (kPi * t) : 0.0;
}

double T_lambda(Complex lambda) {
  const double r = std::abs(lambda);
  if (r == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  const double d = r - 1.0;
  double ratio = 0.0;  // log(|lambda|^2) / (|lambda|^2 - 1)
  if (std::abs(d) < 1e-5) {
    const double u = d * (r + 1.0);
    ratio = 1.0 + u * (-0.5 + u * (1.0 / 3.0 + u * (-0.25 + u * 0.2)));
  } else {
    ratio = 2.0 * std::log1p(d) / (d * (r + 1.0));
  }
  return std::norm(lambda - 1.0) * ratio;
}

bool in_sigma(double t, Complex lambda) { return T_lambda(lambda) < t; }

SigmaDomain::SigmaDomain(double t, int theta_resolution) : t_(t) {
  require_positive_t(t, "SigmaDomain");
  if (theta_resolution < 16) {
    throw std::invalid_argument("SigmaDomain: theta resolution must be >= 16");
  }
  topology_ = t > 4.0 ? Topology::DoublyConnected : Topology::SimplyConnected;
  if (t >= 4.0) {
    extent_ = kPi;
  } else {
    // The ray minimum of T increases with |theta| on [0, pi], from 0 to 4.
    double lo = 0.0;
    double hi = kPi;
    extent_ = bisect([t](double th) { return min_along_ray(th) - t; }, lo, hi, true);
  }
  profile_.reserve(static_cast<std::size_t>(theta_resolution) + 1);
  for (int i = 0; i <= theta_resolution; ++i) {
    const double th = -extent_ + 2.0 * extent_ * i / theta_resolution;
    profile_.push_back({th, r_inner_or_throw(th), r_outer_or_throw(th)});
  }
}

bool SigmaDomain::ray_hits(double theta) const {
  return std::abs(wrap_angle(theta)) <= extent_;
}

std::optional<double> SigmaDomain::r_outer(double theta) const {
  theta = wrap_angle(theta);
  if (!ray_hits(theta)) {
    return std::nullopt;
  }
  const auto g = [this, theta](double r) { return ray_excess(t_, r, theta); };
  if (g(1.0) >= 0.0) {
    return 1.0;  // the tip: the ray touches the closure at r = 1
  }
  double hi = 2.0;
  while (g(hi) <= 0.0) {
    hi *= 2.0;
    if (hi > 1e300) {
      throw NonConvergence("SigmaDomain::r_outer: no outer crossing found");
    }
  }
  return bisect(g, 1.0, hi, true);
}

std::optional<double> SigmaDomain::r_inner(double theta) const {
  theta = wrap_angle(theta);
  if (!ray_hits(theta)) {
    return std::nullopt;
  }
  const auto g = [this, theta](double r) { return ray_excess(t_, r, theta); };
  if (g(1.0) >= 0.0) {
    return 1.0;
  }
  double lo = 0.5;
  while (g(lo) <= 0.0) {
    lo *= 0.5;
    if (lo < 1e-300) {
      throw NonConvergence("SigmaDomain::r_inner: no inner crossing found");
    }
  }
  return bisect(g, lo, 1.0, false);
}

double SigmaDomain::r_outer_or_throw(double theta) const {
  if (auto r = r_outer(theta)) {
    return *r;
  }
  std::ostringstream os;
  os << "ray at theta=" << theta << " misses Sigma_t (t=" << t_ << ", extent=" << extent_ << ")";
  throw DomainError(os.str());
}

double SigmaDomain::r_inner_or_throw(double theta) const {
  if (auto r = r_inner(theta)) {
    return *r;
  }
  std::ostringstream os;
  os << "ray at theta=" << theta << " misses Sigma_t (t=" << t_ << ", extent=" << extent_ << ")";
  throw DomainError(os.str());
}

HAlphaBeta h_alpha_beta(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw DomainError("h_alpha_beta: r must be finite and > 0");
  }
  const double s = std::log(r);
  const Reduced red = reduced_hab(s);
  const double scale = 2.0 * r * s * s;
  return {red.h, scale * red.a, scale * red.b};
}

double omega(double r, double theta) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw DomainError("omega: r must be finite and > 0");
  }
  const Reduced red = reduced_hab(std::log(r));
  const double c = std::cos(theta);
  const double den = red.b * c + red.a;
  if (!(den > 0.0)) {
    std::ostringstream os;
    os << "omega: vanishing denominator at r=" << r << ", theta=" << theta << " (h=" << red.h
       << ", A=" << red.a << ", B=" << red.b << ")";
    throw NonConvergence(os.str());
  }
  return 1.0 + red.h * (red.a * c + red.b) / den;
}

double w_t(const SigmaDomain& domain, double theta) {
  const double r = domain.r_outer_or_throw(theta);
  return omega(r, theta) / (2.0 * kPi * domain.t());
}

double w_t(double t, double theta) { return w_t(SigmaDomain(t, 16), theta); }

double w_t_via_derivative(const SigmaDomain& domain, double theta, double h) {
  if (!(h > 0.0)) {
    throw std::invalid_argument("w_t_via_derivative: step must be > 0");
  }
  if (!domain.ray_hits(theta)) {
    throw DomainError("w_t_via_derivative: theta outside the angular extent");
  }
  const auto f = [&domain](double th) {
    return ds_dtheta_boundary(domain.r_outer_or_throw(th), th);
  };
  const double d = (f(theta - 2.0 * h) - 8.0 * f(theta - h) + 8.0 * f(theta + h) -
                    f(theta + 2.0 * h)) /
                   (12.0 * h);
  return (2.0 / domain.t() + d) / (4.0 * kPi);
}

double w_t_via_derivative(double t, double theta, double h) {
  return w_t_via_derivative(SigmaDomain(t, 16), theta, h);
}

double mult_brown_density(const SigmaDomain& domain, Complex lambda) {
  if (!in_sigma(domain.t(), lambda)) {
    return 0.0;
  }
  return w_t(domain, std::arg(lambda)) / std::norm(lambda);
}

double mult_brown_density(double t, Complex lambda) {
  if (!in_sigma(t, lambda)) {
    return 0.0;
  }
  return mult_brown_density(SigmaDomain(t, 16), lambda);
}

Complex f_t(double t, Complex lambda) {
  if (lambda == Complex(1.0, 0.0)) {
    throw DomainError("f_t: pole at lambda = 1");
  }
  return lambda * std::exp(0.5 * t * (1.0 + lambda) / (1.0 - lambda));
}

Complex phi_t(const SigmaDomain& domain, Complex lambda) {
  const double tv = T_lambda(lambda);
  if (!(tv <= domain.t() * (1.0 + 1e-9) + 1e-12)) {
    std::ostringstream os;
    os << "phi_t: lambda=" << lambda << " lies outside the closure of Sigma_t (T=" << tv
       << ", t=" << domain.t() << ")";
    throw DomainError(os.str());
  }
  return phi_t_extended(domain, lambda);
}

Complex phi_t_extended(const SigmaDomain& domain, Complex lambda) {
  if (lambda == Complex{}) {
    throw DomainError("phi_t_extended: undefined at lambda = 0");
  }
  const double ext = domain.theta_extent();
  const double theta = std::clamp(std::arg(lambda), -ext, ext);
  const double r = domain.r_outer_or_throw(theta);
  return f_t(domain.t(), std::polar(r, theta));
}

BianeSupport biane_support(double t) {
  require_positive_t(t, "biane_support");
  if (t >= 4.0) {
    return {t, kPi};
  }
  return {t, 0.5 * std::sqrt(t * (4.0 - t)) + std::acos(1.0 - 0.5 * t)};
}

double ds_drho(double t, Complex lambda) {
  require_positive_t(t, "ds_drho");
  if (!in_sigma(t, lambda)) {
    throw DomainError("ds_drho: lambda outside Sigma_t");
  }
  return 2.0 * std::log(std::abs(lambda)) / t + 1.0;
}

double ds_dtheta_boundary(double r, double theta) {
  return 2.0 * r * std::sin(theta) / (r * r + 1.0 - 2.0 * r * std::cos(theta));
}

double ds_dtheta(const SigmaDomain& domain, Complex lambda) {
  if (!in_sigma(domain.t(), lambda)) {
    throw DomainError("ds_dtheta: lambda outside Sigma_t");
  }
  const double theta = std::arg(lambda);
  return ds_dtheta_boundary(domain.r_outer_or_throw(theta), theta);
}

double DensitySpec::operator()(Complex lambda) const {
  switch (kind) {
    case DensityKind::Circular:
      return circular_brown_density(t, lambda);
    case DensityKind::Multiplicative:
      return mult_brown_density(t, lambda);
  }
  return 0.0;
}

MassEstimate integrate_density(const DensitySpec& spec) {
  require_positive_t(spec.t, "integrate_density");
  if (spec.kind == DensityKind::Circular) {
    using rule = boost::math::quadrature::gauss<double, 20>;
    const double rmax = std::sqrt(spec.t);
    const double radial = rule::integrate(
        [&](double r) { return circular_brown_density(spec.t, Complex(r, 0.0)) * r; }, 0.0,
        rmax);
    return {2.0 * kPi * radial, 0.0};
  }
  const SigmaDomain domain(spec.t, 16);
  const double ext = domain.theta_extent();
  const auto integrand = [&domain](double theta) {
    const auto ro = domain.r_outer(theta);
    const auto ri = domain.r_inner(theta);
    if (!ro || !ri) {
      return 0.0;
    }
    return w_t(domain, theta) * std::log(*ro / *ri);
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  double err = 0.0;
  double l1 = 0.0;
  const double half = integrator.integrate(integrand, 0.0, ext, 1e-11, &err, &l1);
  MassEstimate out{2.0 * half, 2.0 * err};
  if (!(out.error_estimate <= 1e-8) || !std::isfinite(out.value)) {
    std::ostringstream os;
    os << "integrate_density: quadrature did not converge (estimate " << out.value
       << ", error " << out.error_estimate << ")";
    throw NonConvergence(os.str());
  }
  return out;
}

AngularHistogram pushforward_histogram(const SigmaDomain& domain, int bins, int segments) {
  if (bins < 1 || segments < 1) {
    throw std::invalid_argument("pushforward_histogram: bins and segments must be >= 1");
  }
  AngularHistogram out;
  out.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) {
    out.edges[static_cast<std::size_t>(i)] = -kPi + 2.0 * kPi * i / bins;
  }
  out.masses.assign(static_cast<std::size_t>(bins), 0.0);
  const double ext = domain.theta_extent();
  const double dth = 2.0 * ext / segments;
  for (int j = 0; j < segments; ++j) {
    const double th = -ext + (j + 0.5) * dth;
    const double ro = domain.r_outer_or_throw(th);
    const double ri = domain.r_inner_or_throw(th);
    const double mass = w_t(domain, th) * std::log(ro / ri) * dth;
    const double phi = std::arg(f_t(domain.t(), std::polar(ro, th)));
    auto idx = static_cast<int>((phi + kPi) / (2.0 * kPi) * bins);
    idx = std::clamp(idx, 0, bins - 1);
    out.masses[static_cast<std::size_t>(idx)] += mass;
  }
  return out;
}

double pushforward_support_edge(const SigmaDomain& domain, int samples) {
  if (samples < 2) {
    throw std::invalid_argument("pushforward_support_edge: need at least 2 samples");
  }
  const double ext = domain.theta_extent();
  double edge = 0.0;
  for (int j = 0; j <= samples; ++j) {
    const double th = ext * j / samples;
    const double r = domain.r_outer_or_throw(th);
    const Complex z = std::polar(r, th);
    if (z == Complex(1.0, 0.0)) {
      continue;
    }
    edge = std::max(edge, std::abs(std::arg(f_t(domain.t(), z))));
  }
  return edge;
}

}  // namespace brownflow::analytic
