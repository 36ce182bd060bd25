#pragma once

#include <optional>
#include <vector>

#include "brownflow/linalg.hpp"

// Closed-form limiting densities and the domain Sigma_t = {T(lambda) < t}
// that carries the Brown measure of free multiplicative Brownian motion.
namespace brownflow::analytic {

/// Semicircle density sqrt(4 - x^2) / (2 pi) on [-2, 2], zero elsewhere.
double semicircle_density(double x);

/// CDF of the semicircle law.
double semicircle_cdf(double x);

// ---- circular Brownian motion --------------------------------------------

/// Limit of S(t, lambda, x) as x -> 0: log|lambda|^2 outside the disk of
/// radius sqrt(t), log t - 1 + |lambda|^2 / t inside.
double circular_s(double t, Complex lambda);

/// The two branches of circular_s, valid on either side of |lambda| = sqrt(t).
double circular_s_inside(double t, Complex lambda);
double circular_s_outside(Complex lambda);

/// Radial derivatives of the two branches at radius r: 2r/t and 2/r.
double circular_s_dr_inside(double t, double r);
double circular_s_dr_outside(double r);

/// 1/(pi t) strictly inside |lambda| < sqrt(t), else 0.
double circular_brown_density(double t, Complex lambda);

// ---- the function T and the domain Sigma_t -------------------------------

/// T(lambda) = |lambda - 1|^2 log(|lambda|^2) / (|lambda|^2 - 1), with the
/// ratio read as 1 on the unit circle; +infinity at lambda = 0.
double T_lambda(Complex lambda);

/// T(lambda) < t. Always false at lambda = 0.
bool in_sigma(double t, Complex lambda);

enum class Topology { SimplyConnected, DoublyConnected };

struct ProfileRow {
  double theta = 0.0;
  double r_inner = 0.0;
  double r_outer = 0.0;
};

/// Sigma_t described ray by ray. Each ray from the origin at angle theta
/// meets the boundary at most twice; the crossings are found by bracketing
/// T(r e^{i theta}) - t on either side of r = 1 and bisecting to full double
/// precision. Radii are always solved exactly; `profile()` is a tabulation
/// on an even grid for export.
class SigmaDomain {
 public:
  /// Throws DomainError for t <= 0 and std::invalid_argument for
  /// theta_resolution < 16.
  SigmaDomain(double t, int theta_resolution = 256);

  double t() const { return t_; }
  Topology topology() const { return topology_; }

  /// Largest |theta| reached by the closure of Sigma_t: pi for t >= 4,
  /// otherwise found by bisection on the minimum of T along each ray.
  double theta_extent() const { return extent_; }

  /// Outer / inner boundary radius along the ray at angle theta, or nullopt
  /// when the ray misses Sigma_t.
  std::optional<double> r_outer(double theta) const;
  std::optional<double> r_inner(double theta) const;

  /// As above but throws DomainError when the ray misses the domain.
  double r_outer_or_throw(double theta) const;
  double r_inner_or_throw(double theta) const;

  /// theta in [-extent, extent] (any theta when t >= 4).
  bool ray_hits(double theta) const;

  const std::vector<ProfileRow>& profile() const { return profile_; }

 private:
  double t_;
  Topology topology_;
  double extent_;
  std::vector<ProfileRow> profile_;
};

inline SigmaDomain build_sigma_domain(double t, int theta_resolution = 256) {
  return SigmaDomain(t, theta_resolution);
}

// ---- the density w_t ------------------------------------------------------

struct HAlphaBeta {
  double h = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
};

/// h(r) = r log(r^2) / (r^2 - 1), alpha = r^2 + 1 - 2 r h,
/// beta = (r^2 + 1) h - 2 r. Written in s = log r, h = s / sinh s; alpha and
/// beta are 2 r s^2 times even power series in s, which are summed directly
/// for |s| < 0.1 to avoid the cancellation near r = 1. Throws for r <= 0.
HAlphaBeta h_alpha_beta(double r);

/// omega(r, theta) = 1 + h (alpha cos(theta) + beta) / (beta cos(theta) + alpha).
/// The common factor 2 r s^2 is cancelled analytically, so r = 1 gives the
/// limit 1 + (2 cos(theta) + 1) / (cos(theta) + 2).
double omega(double r, double theta);

/// w_t(theta) = omega(r_t(theta), theta) / (2 pi t) with r_t the outer radius.
/// Throws DomainError when |theta| exceeds the angular extent.
double w_t(const SigmaDomain& domain, double theta);
double w_t(double t, double theta);

/// (1 / 4 pi) (2/t + d/dtheta [2 r sin(theta) / (r^2 + 1 - 2 r cos(theta))])
/// at r = r_t(theta), differentiated by a 5-point central stencil with step
/// `h` and r_t re-solved at every node.
double w_t_via_derivative(const SigmaDomain& domain, double theta, double h = 1e-4);
double w_t_via_derivative(double t, double theta, double h = 1e-4);

/// w_t(arg lambda) / |lambda|^2 inside Sigma_t, else 0.
double mult_brown_density(const SigmaDomain& domain, Complex lambda);
double mult_brown_density(double t, Complex lambda);

// ---- conformal maps and Biane's measure ----------------------------------

/// f_t(lambda) = lambda exp((t/2) (1 + lambda) / (1 - lambda)); throws
/// DomainError at the pole lambda = 1.
Complex f_t(double t, Complex lambda);

/// Phi_t: f_t at the outer boundary point on the ray through lambda. Defined
/// on the closure of Sigma_t (boundary membership up to a relative slack of
/// 1e-9 in T); throws DomainError elsewhere.
Complex phi_t(const SigmaDomain& domain, Complex lambda);

/// Extension of Phi_t to every lambda != 0 for finite-N eigenvalue clouds:
/// the angle of lambda is clamped to the angular extent and the outer
/// boundary point on that ray is mapped by f_t. Agrees with phi_t on the
/// closure of Sigma_t.
Complex phi_t_extended(const SigmaDomain& domain, Complex lambda);

struct BianeSupport {
  double t = 0.0;
  double theta_max = 0.0;  // support is {e^{i phi} : |phi| <= theta_max}
};

/// theta_max = sqrt(t (4 - t)) / 2 + arccos(1 - t/2) for t < 4, pi for
/// t >= 4. Throws DomainError for t <= 0.
BianeSupport biane_support(double t);

// ---- derivatives of s_t inside Sigma_t -----------------------------------

/// r d s_t / dr = 2 log|lambda| / t + 1 inside Sigma_t; DomainError outside.
double ds_drho(double t, Complex lambda);

/// 2 r sin(theta) / (r^2 + 1 - 2 r cos(theta)).
double ds_dtheta_boundary(double r, double theta);

/// The theta-derivative of s_t inside Sigma_t, which is constant along the
/// radial segment and equals its boundary value at the outer radius.
double ds_dtheta(const SigmaDomain& domain, Complex lambda);

// ---- total mass -----------------------------------------------------------

enum class DensityKind { Circular, Multiplicative };

struct DensitySpec {
  DensityKind kind = DensityKind::Circular;
  double t = 1.0;

  double operator()(Complex lambda) const;
};

struct MassEstimate {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Total mass of the density over its support. The circular disk is
/// integrated by a tensor Gauss rule in (theta, r); for the multiplicative
/// density the radial integral of w_t(theta) / r^2 * r is done exactly,
/// leaving the 1D integral of w_t(theta) log(r_outer / r_inner) over theta
/// by adaptive tanh-sinh quadrature. Throws NonConvergence if the
/// quadrature error estimate exceeds 1e-8.
MassEstimate integrate_density(const DensitySpec& spec);

// ---- push-forward through Phi_t ------------------------------------------

/// Histogram of the push-forward of the multiplicative Brown measure under
/// Phi_t onto angles in (-pi, pi]: the mass w_t(theta) log(r_out/r_in)
/// dtheta of each radial segment is transported to arg Phi_t. `segments`
/// midpoint slices over the angular extent.
struct AngularHistogram {
  std::vector<double> edges;
  std::vector<double> masses;
};
AngularHistogram pushforward_histogram(const SigmaDomain& domain, int bins = 90,
                                       int segments = 4000);

/// Largest |arg Phi_t| over the closure of Sigma_t (attained at the tip of
/// the domain for t < 4).
double pushforward_support_edge(const SigmaDomain& domain, int samples = 2000);

}  // namespace brownflow::analytic
