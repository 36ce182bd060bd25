#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "brownflow/brown_analytic.hpp"
#include "brownflow/error.hpp"
#include "brownflow/rng.hpp"

using namespace brownflow;
using namespace brownflow::analytic;

namespace {

constexpr double kPi = std::numbers::pi;

// Direct evaluation in long double, accurate enough to check the series
// branch of h_alpha_beta away from r = 1 itself.
HAlphaBeta hab_long_double(double r) {
  const long double R = r;
  const long double h = R * std::log(R * R) / (R * R - 1.0L);
  return {static_cast<double>(h), static_cast<double>(R * R + 1.0L - 2.0L * R * h),
          static_cast<double>((R * R + 1.0L) * h - 2.0L * R)};
}

}  // namespace

// ---- semicircle and circular case --------------------------------------

TEST(Semicircle, Values) {
  EXPECT_DOUBLE_EQ(semicircle_density(0.0), 1.0 / kPi);
  EXPECT_EQ(semicircle_density(2.0), 0.0);
  EXPECT_EQ(semicircle_density(-2.0), 0.0);
  EXPECT_EQ(semicircle_density(3.0), 0.0);
}

TEST(Semicircle, IntegratesToOne) {
  boost::math::quadrature::tanh_sinh<double> q;
  const double mass = q.integrate([](double x) { return semicircle_density(x); }, -2.0, 2.0);
  EXPECT_NEAR(mass, 1.0, 1e-10);
  EXPECT_NEAR(semicircle_cdf(2.0), 1.0, 1e-15);
  EXPECT_NEAR(semicircle_cdf(0.0), 0.5, 1e-15);
  EXPECT_EQ(semicircle_cdf(-5.0), 0.0);
  const double half = q.integrate([](double x) { return semicircle_density(x); }, -2.0, 0.7);
  EXPECT_NEAR(semicircle_cdf(0.7), half, 1e-10);
}

TEST(CircularS, BranchesAndContinuity) {
  for (double t : {0.25, 1.0, 3.0}) {
    const Complex edge = std::polar(std::sqrt(t), 0.4);
    EXPECT_NEAR(circular_s_inside(t, edge), std::log(t), 1e-14);
    EXPECT_NEAR(circular_s_outside(edge), std::log(t), 1e-14);
    EXPECT_NEAR(circular_s(t, 0.0), std::log(t) - 1.0, 1e-15);
    const double r = std::sqrt(t);
    EXPECT_NEAR(circular_s_dr_inside(t, r), 2.0 / std::sqrt(t), 1e-14);
    EXPECT_NEAR(circular_s_dr_outside(r), 2.0 / std::sqrt(t), 1e-14);
    EXPECT_DOUBLE_EQ(circular_s(t, 2.0 * edge), std::log(4.0 * t));
    EXPECT_DOUBLE_EQ(circular_s(t, 0.5 * edge), std::log(t) - 1.0 + 0.25);
  }
}

TEST(CircularDensity, Values) {
  EXPECT_DOUBLE_EQ(circular_brown_density(1.0, 0.0), 1.0 / kPi);
  EXPECT_EQ(circular_brown_density(1.0, 2.0), 0.0);
  const auto m = integrate_density({DensityKind::Circular, 1.0});
  EXPECT_NEAR(m.value, 1.0, 1e-12);
  EXPECT_NEAR(integrate_density({DensityKind::Circular, 2.5}).value, 1.0, 1e-12);
}

// ---- T and Sigma_t ------------------------------------------------------

TEST(TLambda, Values) {
  EXPECT_EQ(T_lambda(1.0), 0.0);
  EXPECT_NEAR(T_lambda(-1.0), 4.0, 1e-15);
  EXPECT_TRUE(std::isinf(T_lambda(0.0)));
  for (double th = -3.0; th <= 3.0; th += 0.25) {
    EXPECT_NEAR(T_lambda(std::polar(1.0, th)), 2.0 - 2.0 * std::cos(th), 1e-14);
  }
  // Continuity across the unit circle.
  for (double th : {0.5, 2.0}) {
    const double on = T_lambda(std::polar(1.0, th));
    EXPECT_NEAR(T_lambda(std::polar(1.0 + 1e-7, th)), on, 1e-6);
    EXPECT_NEAR(T_lambda(std::polar(1.0 - 1e-7, th)), on, 1e-6);
    EXPECT_NEAR(T_lambda(std::polar(1.0 + 2e-5, th)), T_lambda(std::polar(1.0 + 5e-6, th)),
                1e-4);
  }
}

TEST(TLambda, SymmetricAndPositiveAwayFromOne) {
  GaussianStream g({55, 0});
  for (int i = 0; i < 2000; ++i) {
    const Complex z(4.0 * g.uniform() - 2.0, 4.0 * g.uniform() - 2.0);
    EXPECT_DOUBLE_EQ(T_lambda(z), T_lambda(std::conj(z)));
    EXPECT_GT(T_lambda(z), 0.0);
  }
}

TEST(InSigma, Examples) {
  for (double t : {0.01, 1.0, 5.0}) {
    EXPECT_TRUE(in_sigma(t, 1.0));
    EXPECT_FALSE(in_sigma(t, 0.0));
  }
  EXPECT_FALSE(in_sigma(3.9, -1.0));
  EXPECT_TRUE(in_sigma(4.1, -1.0));
}

TEST(SigmaDomain, Construction) {
  EXPECT_THROW(SigmaDomain(0.0), DomainError);
  EXPECT_THROW(SigmaDomain(1.0, 15), std::invalid_argument);
  EXPECT_EQ(SigmaDomain(4.0).topology(), Topology::SimplyConnected);
  EXPECT_EQ(SigmaDomain(4.1).topology(), Topology::DoublyConnected);
  EXPECT_EQ(SigmaDomain(3.0).topology(), Topology::SimplyConnected);
  EXPECT_EQ(build_sigma_domain(2.0, 32).profile().size(), 33u);
}

TEST(SigmaDomain, ExtentMatchesUnitCircleMinimum) {
  // The minimum of T on each ray is at r = 1 with value 2 - 2 cos(theta).
  for (double t : {0.1, 1.0, 2.0, 3.9}) {
    EXPECT_NEAR(SigmaDomain(t).theta_extent(), std::acos(1.0 - t / 2.0), 1e-9) << t;
  }
  EXPECT_EQ(SigmaDomain(4.0).theta_extent(), kPi);
  EXPECT_EQ(SigmaDomain(7.0).theta_extent(), kPi);
}

TEST(SigmaDomain, BoundaryResidualOnProfiles) {
  for (double t : {0.5, 1.0, 2.0, 3.9, 4.1, 7.0}) {
    const SigmaDomain d(t, 64);
    for (const ProfileRow& row : d.profile()) {
      const double t_out = T_lambda(std::polar(row.r_outer, row.theta));
      const double t_in = T_lambda(std::polar(row.r_inner, row.theta));
      if (row.r_outer > 1.0) {
        EXPECT_NEAR(t_out, t, 1e-10) << t << " " << row.theta;
        EXPECT_NEAR(t_in, t, 1e-10) << t << " " << row.theta;
        EXPECT_LT(row.r_inner, row.r_outer);
      }
    }
  }
}

TEST(SigmaDomain, NegativeAxisAfterTopologyChange) {
  const SigmaDomain d(4.1);
  const double ro = *d.r_outer(kPi);
  const double ri = *d.r_inner(kPi);
  EXPECT_LT(ri, 1.0);
  EXPECT_GT(ro, 1.0);
  EXPECT_NEAR(T_lambda(std::polar(ro, kPi)), 4.1, 1e-10);
  EXPECT_NEAR(T_lambda(std::polar(ri, kPi)), 4.1, 1e-10);
}

TEST(SigmaDomain, RayMissesBeyondExtent) {
  const SigmaDomain d(2.0);
  const double ext = d.theta_extent();
  EXPECT_FALSE(d.r_outer(ext + 1e-6).has_value());
  EXPECT_FALSE(d.r_inner(-ext - 1e-6).has_value());
  EXPECT_THROW(d.r_outer_or_throw(ext + 1e-3), DomainError);
  EXPECT_TRUE(d.r_outer(ext - 1e-6).has_value());
}

TEST(SigmaDomain, ProfilesEven) {
  for (double t : {1.0, 4.1}) {
    const SigmaDomain d(t);
    for (double th = 0.05; th < d.theta_extent(); th += 0.1) {
      EXPECT_NEAR(*d.r_outer(-th), *d.r_outer(th), 1e-12);
      EXPECT_NEAR(*d.r_inner(-th), *d.r_inner(th), 1e-12);
    }
  }
}

TEST(SigmaDomain, InnerTimesOuterIsOne) {
  // T(1 / conj(lambda)) = T(lambda), so the two crossings are reciprocal.
  const SigmaDomain d(2.0);
  for (double th = 0.0; th < d.theta_extent() - 0.01; th += 0.2) {
    EXPECT_NEAR(*d.r_inner(th) * *d.r_outer(th), 1.0, 1e-12);
  }
}

// ---- h, alpha, beta, omega ---------------------------------------------

TEST(HAlphaBeta, Values) {
  const HAlphaBeta one = h_alpha_beta(1.0);
  EXPECT_EQ(one.h, 1.0);
  EXPECT_EQ(one.alpha, 0.0);
  EXPECT_EQ(one.beta, 0.0);
  const double e = std::exp(1.0);
  EXPECT_NEAR(h_alpha_beta(e).h, 2.0 * e / (e * e - 1.0), 1e-15);
  EXPECT_NEAR(h_alpha_beta(e).h, 0.8509181282, 1e-10);
  EXPECT_THROW(h_alpha_beta(0.0), DomainError);
  EXPECT_THROW(h_alpha_beta(-1.0), DomainError);
}

TEST(HAlphaBeta, SeriesBranchMatchesDirectFormula) {
  for (double s : {-0.099, -0.05, -0.01, 0.003, 0.02, 0.07, 0.0999}) {
    const double r = std::exp(s);
    const HAlphaBeta a = h_alpha_beta(r);
    const HAlphaBeta b = hab_long_double(r);
    EXPECT_NEAR(a.h, b.h, 1e-15);
    EXPECT_NEAR(a.alpha / b.alpha, 1.0, 1e-9) << s;
    EXPECT_NEAR(a.beta / b.beta, 1.0, 1e-9) << s;
  }
  // Leading behaviour alpha ~ (4/3) u^2, beta ~ (2/3) u^2 with u = r - 1.
  const double u = 1e-4;
  EXPECT_NEAR(h_alpha_beta(1.0 + u).alpha / (u * u), 4.0 / 3.0, 1e-3);
  EXPECT_NEAR(h_alpha_beta(1.0 + u).beta / (u * u), 2.0 / 3.0, 1e-3);
}

TEST(HAlphaBeta, BranchesStitch) {
  for (double s : {0.1, -0.1}) {
    const HAlphaBeta a = h_alpha_beta(std::exp(s * (1.0 - 1e-12)));
    const HAlphaBeta b = h_alpha_beta(std::exp(s * (1.0 + 1e-12)));
    EXPECT_NEAR(a.h, b.h, 1e-13);
    EXPECT_NEAR(a.alpha, b.alpha, 1e-13);
    EXPECT_NEAR(a.beta, b.beta, 1e-13);
  }
}

TEST(Omega, Limits) {
  EXPECT_NEAR(omega(1.0, 0.0), 2.0, 1e-15);
  EXPECT_NEAR(omega(1.0 + 1e-3, 0.0), 2.0, 1e-3);
  EXPECT_NEAR(omega(1.0 - 1e-3, 0.0), 2.0, 1e-3);
  for (double th : {0.0, 1.0, 2.0}) {
    const double c = std::cos(th);
    EXPECT_NEAR(omega(1.0, th), 1.0 + (2.0 * c + 1.0) / (c + 2.0), 1e-14);
    EXPECT_LT(std::abs(omega(1.0 + 1e-6, th) - omega(1.0 - 1e-6, th)), 1e-6);
  }
  for (double r : {0.3, 0.8, 1.5, 4.0}) {
    EXPECT_NEAR(omega(r, kPi), 1.0 - h_alpha_beta(r).h, 1e-12);
  }
}

// ---- w_t and W_t --------------------------------------------------------

TEST(Wt, TwoFormulasAgree) {
  for (double t : {1.0, 2.0, 3.9, 4.1, 7.0}) {
    const SigmaDomain d(t);
    const double ext = d.theta_extent();
    for (double frac : {0.0, 0.3, 0.6, 0.9}) {
      const double th = frac * ext;
      const double a = w_t(d, th);
      const double b = w_t_via_derivative(d, th);
      EXPECT_NEAR(b / a, 1.0, 1e-4) << t << " " << th;
    }
  }
}

TEST(Wt, EvenPositiveAndCentreValue) {
  const SigmaDomain d(1.0);
  for (double th = 0.0; th < d.theta_extent(); th += 0.05) {
    EXPECT_NEAR(w_t(d, th), w_t(d, -th), 1e-14);
    EXPECT_GT(w_t(d, th), 0.0);
  }
  const double r1 = *d.r_outer(0.0);
  EXPECT_NEAR(T_lambda(r1), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(w_t(d, 0.0), omega(r1, 0.0) / (2.0 * kPi));
  EXPECT_NEAR(w_t(1.0, 0.0), w_t(d, 0.0), 1e-15);
  EXPECT_THROW(w_t(d, d.theta_extent() + 0.01), DomainError);
  EXPECT_THROW(w_t_via_derivative(d, d.theta_extent() + 0.01), DomainError);
}

TEST(MultDensity, RadialFormAndSupport) {
  const SigmaDomain d(2.0);
  EXPECT_EQ(mult_brown_density(d, 10.0), 0.0);
  EXPECT_EQ(mult_brown_density(d, 0.0), 0.0);
  const double th = 0.7;
  const Complex a = std::polar(0.8, th);
  const Complex b = std::polar(1.3, th);
  ASSERT_TRUE(in_sigma(2.0, a));
  ASSERT_TRUE(in_sigma(2.0, b));
  EXPECT_NEAR(mult_brown_density(d, a) / mult_brown_density(d, b), (1.3 / 0.8) * (1.3 / 0.8),
              1e-12);
  EXPECT_NEAR(0.64 * mult_brown_density(d, a), 1.69 * mult_brown_density(d, b), 1e-14);
  EXPECT_DOUBLE_EQ(mult_brown_density(2.0, a), mult_brown_density(d, a));
}

TEST(MultDensity, TotalMassIsOne) {
  for (double t : {0.5, 1.0, 2.0, 3.9, 4.0, 4.1, 7.0}) {
    const MassEstimate m = integrate_density({DensityKind::Multiplicative, t});
    EXPECT_NEAR(m.value, 1.0, 1e-3) << t;
  }
}

// ---- f_t, Phi_t, Biane ----------------------------------------------------

TEST(Ft, Values) {
  EXPECT_NEAR(std::abs(f_t(1.7, -1.0) + 1.0), 0.0, 1e-15);
  const Complex z(0.3, -2.0);
  EXPECT_EQ(f_t(0.0, z), z);
  EXPECT_THROW(f_t(1.0, 1.0), DomainError);
}

TEST(Ft, BoundaryMapsToCircle) {
  for (double t : {0.5, 2.0, 4.1}) {
    const SigmaDomain d(t, 64);
    for (const ProfileRow& row : d.profile()) {
      if (row.r_outer == 1.0) continue;  // tip, where f_t has its pole
      EXPECT_NEAR(std::abs(f_t(t, std::polar(row.r_outer, row.theta))), 1.0, 1e-8);
      EXPECT_NEAR(std::abs(f_t(t, std::polar(row.r_inner, row.theta))), 1.0, 1e-8);
    }
  }
}

TEST(PhiT, UnitModulusEquivariantAndWellDefined) {
  const SigmaDomain d(4.1);
  for (double th = -3.1; th < 3.1; th += 0.2) {
    const Complex outer = std::polar(*d.r_outer(th), th);
    const Complex inner = std::polar(*d.r_inner(th), th);
    EXPECT_LT(std::abs(f_t(4.1, outer) - f_t(4.1, inner)), 1e-6) << th;
    const Complex mid = std::polar(std::sqrt(*d.r_outer(th) * *d.r_inner(th)), th);
    const Complex p = phi_t(d, mid);
    EXPECT_NEAR(std::abs(p), 1.0, 1e-8);
    EXPECT_NEAR(std::abs(phi_t(d, std::conj(mid)) - std::conj(p)), 0.0, 1e-12);
  }
  const SigmaDomain d1(1.0);
  EXPECT_NEAR(std::arg(phi_t(d1, 1.1)), 0.0, 1e-15);
  EXPECT_THROW(phi_t(d1, 5.0), DomainError);
  EXPECT_THROW(phi_t_extended(d1, 0.0), DomainError);
  EXPECT_NEAR(std::abs(phi_t_extended(d1, 5.0) - phi_t(d1, 1.1)), 0.0, 1e-12);
}

TEST(Biane, Endpoints) {
  EXPECT_NEAR(biane_support(4.0).theta_max, kPi, 1e-15);
  EXPECT_NEAR(biane_support(2.0).theta_max, 1.0 + kPi / 2.0, 1e-15);
  EXPECT_LT(biane_support(1e-10).theta_max, 1e-4);
  EXPECT_EQ(biane_support(7.0).theta_max, kPi);
  EXPECT_LT(biane_support(3.999).theta_max, kPi);
  EXPECT_THROW(biane_support(0.0), DomainError);
}

TEST(Biane, PushforwardStaysInSupport) {
  for (double t : {0.5, 1.0, 2.0, 3.5}) {
    const SigmaDomain d(t);
    const double edge = pushforward_support_edge(d);
    EXPECT_LE(edge, biane_support(t).theta_max + 1e-3) << t;
    EXPECT_GE(edge, biane_support(t).theta_max - 1e-3) << t;
    const AngularHistogram h = pushforward_histogram(d, 90, 2000);
    double mass = 0.0;
    for (std::size_t i = 0; i < h.masses.size(); ++i) {
      mass += h.masses[i];
      const double lo = h.edges[i];
      const double hi = h.edges[i + 1];
      const double bound = biane_support(t).theta_max + 1e-3;
      if (lo > bound || hi < -bound) {
        EXPECT_EQ(h.masses[i], 0.0);
      }
    }
    EXPECT_NEAR(mass, 1.0, 1e-3);
  }
}

// ---- derivatives of s_t ---------------------------------------------------

TEST(Derivatives, Values) {
  EXPECT_DOUBLE_EQ(ds_drho(1.0, 1.0), 1.0);
  EXPECT_NEAR(ds_drho(1.0, std::exp(0.2)), 1.4, 1e-15);
  EXPECT_THROW(ds_drho(1.0, -1.0), DomainError);
  EXPECT_EQ(ds_dtheta_boundary(1.3, 0.0), 0.0);
}

TEST(Derivatives, InnerAndOuterBoundaryAgree) {
  const SigmaDomain d(4.1);
  for (double th = -3.0; th <= 3.0; th += 0.25) {
    EXPECT_NEAR(ds_dtheta_boundary(*d.r_outer(th), th), ds_dtheta_boundary(*d.r_inner(th), th),
                1e-9)
        << th;
  }
  const Complex z = std::polar(1.0, 0.8);
  EXPECT_DOUBLE_EQ(ds_dtheta(d, z), ds_dtheta_boundary(*d.r_outer(0.8), 0.8));
}
