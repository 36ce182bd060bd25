#pragma once

#include <iosfwd>
#include <vector>

#include "brownflow/linalg.hpp"
#include "brownflow/ode.hpp"

// Characteristics of the Hamilton-Jacobi equations satisfied by the
// regularized log-determinant S(t, lambda, x):
//   circular case        H(x, p) = -x p^2
//   multiplicative case  H = -x p_x (1 + (a^2 + b^2) p_x - x p_x - a p_a - b p_b)
// with lambda = a + ib. Along a characteristic, S(t, x(t)) follows from the
// initial data by S0 - H0 t + integral of p . dx/ds.
namespace brownflow::hj {

// ---- circular case, closed form ------------------------------------------

struct CircCharacteristic {
  Complex lambda;
  double x0 = 1.0;

  /// Throws DomainError unless x0 > 0.
  CircCharacteristic(Complex lambda, double x0);

  double p0() const { return 1.0 / lifetime(); }
  double lifetime() const { return std::norm(lambda) + x0; }
};

/// x0 (1 - t / (|lambda|^2 + x0))^2 for 0 <= t <= lifetime (the value at the
/// lifetime itself is the limit 0). LifetimeExceeded past the lifetime.
double circ_x_of_t(const CircCharacteristic& c, double t);

/// p0 / (1 - p0 t) for 0 <= t < lifetime.
double circ_p_of_t(const CircCharacteristic& c, double t);

/// log(|lambda|^2 + x0) - x0 t / (|lambda|^2 + x0)^2 for 0 <= t < lifetime.
double circ_S_along(const CircCharacteristic& c, double t);

/// The x0 whose characteristic reaches x at time t: the unique root of
/// x(t; x0) = x on x0 > max(0, t - |lambda|^2), where x(t; .) is increasing.
double circ_x0_for(double t, Complex lambda, double x);

/// S(t, lambda, x) for t >= 0, x > 0 via circ_x0_for and circ_S_along.
double circ_S_at(double t, Complex lambda, double x);

/// Neville extrapolation to x = 0 of values sampled at the given x, as a
/// polynomial in sqrt(x). Needs at least two distinct points.
double richardson_sqrt(const std::vector<double>& xs, const std::vector<double>& values);

// ---- general Hamiltonian flows -------------------------------------------

enum class HamiltonianId { Circular, Multiplicative };

/// State layout: circular (x, p); multiplicative (a, b, x, p_a, p_b, p_x).
using StateVector = ode::Vector;

struct MultState {
  double time = 0.0;
  double a = 0.0, b = 0.0, x = 0.0;
  double p_a = 0.0, p_b = 0.0, p_x = 0.0;

  StateVector to_vector() const;
  static MultState from_vector(const StateVector& v, double time = 0.0);
  Complex lambda() const { return {a, b}; }
};

double hamiltonian(HamiltonianId id, const StateVector& y);

/// Time derivative (dH/dp, -dH/dq) of the state.
void hamilton_rhs(HamiltonianId id, const StateVector& y, StateVector& dydt);

/// p . dH/dp, the integrand p . dx/ds of the value formula.
double p_dot_velocity(HamiltonianId id, const StateVector& y);

struct Trajectory {
  HamiltonianId id = HamiltonianId::Circular;
  double t_requested = 0.0;
  ode::Solution solution;

  bool complete() const { return solution.completed(); }
  bool blew_up() const { return !solution.completed(); }
  double t_end() const { return solution.t_end(); }
  const StateVector& initial_state() const { return solution.states.front(); }
  const StateVector& final_state() const { return solution.final_state(); }
  StateVector state_at(double t) const { return solution.at(t); }

  /// Largest |H(s) - H(0)| over the accepted steps.
  double max_hamiltonian_drift() const;
  /// Largest |Psi(s) - Psi(0)| (multiplicative case only).
  double max_psi_drift() const;

  /// CSV with columns t, the state components, h and (multiplicative) psi.
  void write_csv(std::ostream& os) const;
};

/// Integrates Hamilton's equations from `init` over [0, t_final] with
/// relative and absolute tolerance `tol`. Blow-up (state norm above 1e12 or
/// step below 1e-14) ends the trajectory early without throwing.
Trajectory integrate_hamilton(HamiltonianId id, const StateVector& init, double t_final,
                              double tol = 1e-10);

/// S0 - H0 t + integral of p . dx/ds, by Simpson's rule on every integrator
/// step with the midpoint taken from dense output. Throws DomainError if
/// the trajectory did not reach its requested time.
double hj_value_along(const Trajectory& traj, double s0);

// ---- multiplicative case --------------------------------------------------

/// (a0, b0, x0) with momenta from the gradient of log(|lambda - 1|^2 + x).
MultState mult_initial_state(Complex lambda0, double x0);

double mult_hamiltonian(const MultState& s);
double mult_psi(const MultState& s);

/// x p_x + (a p_a + b p_b) / 2 on a state vector.
double mult_psi(const StateVector& y);

struct LifetimeResult {
  double time = 0.0;
  bool found = false;  // false: no blow-up before the horizon (time = horizon)
};

/// Blow-up time of the characteristic from mult_initial_state(lambda0, x0),
/// located by bisection on the final time until the bracket is below
/// tol * max(1, time). The search horizon is 10 T(lambda0) + 10.
LifetimeResult mult_lifetime(Complex lambda0, double x0, double tol = 1e-10);

/// Circular analogue, |lambda|^2 + x0.
double circ_lifetime(Complex lambda, double x0);

/// log(|l0 - 1|^2 + x0) - x0 t / (|l0 - 1|^2 + x0)^2 + log|l(t)| - log|l0|.
double mult_S_formula(const Trajectory& traj);

struct ShootingResult {
  Complex lambda0;
  double x0 = 0.0;
  Complex lambda_t;
  double x_t = 0.0;
  double p_a_t = 0.0, p_b_t = 0.0, p_x_t = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;

  /// a p_a + b p_b at the endpoint: the log-radial derivative of S.
  double radial_derivative() const { return lambda_t.real() * p_a_t + lambda_t.imag() * p_b_t; }
  /// a p_b - b p_a at the endpoint: the angular derivative of S.
  double angular_derivative() const {
    return lambda_t.real() * p_b_t - lambda_t.imag() * p_a_t;
  }
};

struct ShootingOptions {
  double tol = 1e-10;          // on max(|da|, |db|, |log x(t) - log eps|)
  double integrator_tol = 1e-12;
  int max_iterations = 60;
};

/// Newton iteration on (a0, b0, log x0) so that the characteristic ends at
/// (Re lambda, Im lambda, epsilon) at time t. The Jacobian of the flow map is
/// taken by central finite differences. Seeded with lambda0 = lambda and
/// x0 = t - T(lambda). Throws DomainError unless lambda is in Sigma_t and
/// epsilon > 0.
ShootingResult shoot_inside(double t, Complex lambda, double epsilon,
                            const ShootingOptions& options = {});

/// Radial derivative a p_a + b p_b of s_t at lambda: shooting at
/// epsilon in {1e-4, 1e-5, 1e-6} followed by richardson_sqrt. Throws
/// NonConvergence if any shot fails.
double shoot_radial_derivative(double t, Complex lambda, const ShootingOptions& options = {});

}  // namespace brownflow::hj
