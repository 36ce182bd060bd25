#include "brownflow/hj_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/LU>
#include <boost/math/tools/roots.hpp>

#include "brownflow/brown_analytic.hpp"
#include "brownflow/error.hpp"

namespace brownflow::hj {

namespace {

void check_lifetime(const CircCharacteristic& c, double t, bool allow_endpoint) {
  if (!(t >= 0.0)) {
    throw DomainError("circular characteristic: t must be >= 0");
  }
  const double life = c.lifetime();
  if (t > life || (!allow_endpoint && t == life)) {
    std::ostringstream os;
    os << "circular characteristic: t=" << t << " is past the lifetime " << life;
    throw LifetimeExceeded(os.str());
  }
}

}  // namespace

CircCharacteristic::CircCharacteristic(Complex lambda_, double x0_) : lambda(lambda_), x0(x0_) {
  if (!(x0 > 0.0) || !std::isfinite(x0)) {
    throw DomainError("CircCharacteristic: x0 must be finite and > 0");
  }
}

double circ_x_of_t(const CircCharacteristic& c, double t) {
  check_lifetime(c, t, true);
  const double q = 1.0 - t / c.lifetime();
  return c.x0 * q * q;
}

double circ_p_of_t(const CircCharacteristic& c, double t) {
  check_lifetime(c, t, false);
  const double p0 = c.p0();
  return p0 / (1.0 - p0 * t);
}

double circ_S_along(const CircCharacteristic& c, double t) {
  check_lifetime(c, t, false);
  const double life = c.lifetime();
  return std::log(life) - c.x0 * t / (life * life);
}

double circ_x0_for(double t, Complex lambda, double x) {
  if (!(t >= 0.0) || !(x > 0.0)) {
    throw DomainError("circ_x0_for: need t >= 0 and x > 0");
  }
  if (t == 0.0) {
    return x;
  }
  const double m = std::norm(lambda);
  const auto g = [=](double x0) {
    const double q = 1.0 - t / (m + x0);
    return x0 * q * q - x;
  };
  const double lo = std::max(0.0, t - m);
  double hi = std::max(2.0 * lo, 1.0);
  while (g(hi) <= 0.0) {
    hi *= 2.0;
    if (!std::isfinite(hi)) {
      throw NonConvergence("circ_x0_for: no upper bracket");
    }
  }
  std::uintmax_t iters = 300;
  const auto bracket = boost::math::tools::toms748_solve(
      g, lo, hi, -x, g(hi), boost::math::tools::eps_tolerance<double>(52), iters);
  double x0 = 0.5 * (bracket.first + bracket.second);
  // One Newton polish; the derivative doubles as the monotonicity check.
  const double life = m + x0;
  const double q = 1.0 - t / life;
  const double dg = q * q + 2.0 * x0 * q * t / (life * life);
  if (!(dg > 0.0)) {
    std::ostringstream os;
    os << "circ_x0_for: x(t; x0) not increasing at x0=" << x0 << " (t=" << t
       << ", |lambda|^2=" << m << ")";
    throw NonConvergence(os.str());
  }
  const double polished = x0 - g(x0) / dg;
  if (polished > lo && std::abs(g(polished)) <= std::abs(g(x0))) {
    x0 = polished;
  }
  return x0;
}

double circ_S_at(double t, Complex lambda, double x) {
  if (!(t >= 0.0) || !(x > 0.0)) {
    throw DomainError("circ_S_at: need t >= 0 and x > 0");
  }
  const double x0 = circ_x0_for(t, lambda, x);
  return circ_S_along(CircCharacteristic(lambda, x0), t);
}

double richardson_sqrt(const std::vector<double>& xs, const std::vector<double>& values) {
  if (xs.size() != values.size() || xs.size() < 2) {
    throw std::invalid_argument("richardson_sqrt: need matching lists of >= 2 points");
  }
  std::vector<double> h(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0)) {
      throw std::invalid_argument("richardson_sqrt: sample points must be > 0");
    }
    h[i] = std::sqrt(xs[i]);
  }
  std::vector<double> p = values;
  const std::size_t n = p.size();
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t i = 0; i + k < n; ++i) {
      const double den = h[i] - h[i + k];
      if (den == 0.0) {
        throw std::invalid_argument("richardson_sqrt: repeated sample point");
      }
      // Value at 0 of the line through (h[i], p[i]) and (h[i+k], p[i+1]).
      p[i] = (h[i] * p[i + 1] - h[i + k] * p[i]) / den;
    }
  }
  return p[0];
}

// ---- Hamiltonians ----------------------------------------------------------

StateVector MultState::to_vector() const {
  StateVector v(6);
  v << a, b, x, p_a, p_b, p_x;
  return v;
}

MultState MultState::from_vector(const StateVector& v, double time) {
  if (v.size() != 6) {
    throw InvalidDimension("MultState::from_vector: expected 6 components");
  }
  return {time, v[0], v[1], v[2], v[3], v[4], v[5]};
}

double hamiltonian(HamiltonianId id, const StateVector& y) {
  if (id == HamiltonianId::Circular) {
    return -y[0] * y[1] * y[1];
  }
  const double a = y[0], b = y[1], x = y[2], pa = y[3], pb = y[4], px = y[5];
  const double q = 1.0 + (a * a + b * b) * px - x * px - a * pa - b * pb;
  return -x * px * q;
}

void hamilton_rhs(HamiltonianId id, const StateVector& y, StateVector& dydt) {
  dydt.resize(y.size());
  if (id == HamiltonianId::Circular) {
    const double x = y[0], p = y[1];
    dydt[0] = -2.0 * x * p;
    dydt[1] = p * p;
    return;
  }
  const double a = y[0], b = y[1], x = y[2], pa = y[3], pb = y[4], px = y[5];
  const double rho2 = a * a + b * b;
  const double q = 1.0 + rho2 * px - x * px - a * pa - b * pb;
  const double xpx = x * px;
  dydt[0] = a * xpx;                           // dH/dp_a
  dydt[1] = b * xpx;                           // dH/dp_b
  dydt[2] = -x * q - xpx * (rho2 - x);         // dH/dp_x
  dydt[3] = xpx * (2.0 * a * px - pa);         // -dH/da
  dydt[4] = xpx * (2.0 * b * px - pb);         // -dH/db
  dydt[5] = px * q - xpx * px;                 // -dH/dx
}

double p_dot_velocity(HamiltonianId id, const StateVector& y) {
  StateVector d;
  hamilton_rhs(id, y, d);
  if (id == HamiltonianId::Circular) {
    return y[1] * d[0];
  }
  return y[3] * d[0] + y[4] * d[1] + y[5] * d[2];
}

double Trajectory::max_hamiltonian_drift() const {
  const double h0 = hamiltonian(id, initial_state());
  double drift = 0.0;
  for (const auto& s : solution.states) {
    drift = std::max(drift, std::abs(hamiltonian(id, s) - h0));
  }
  return drift;
}

double Trajectory::max_psi_drift() const {
  if (id != HamiltonianId::Multiplicative) {
    throw std::logic_error("max_psi_drift: only defined for the multiplicative system");
  }
  const double psi0 = mult_psi(initial_state());
  double drift = 0.0;
  for (const auto& s : solution.states) {
    drift = std::max(drift, std::abs(mult_psi(s) - psi0));
  }
  return drift;
}

void Trajectory::write_csv(std::ostream& os) const {
  const bool mult = id == HamiltonianId::Multiplicative;
  os << (mult ? "t,a,b,x,p_a,p_b,p_x,h,psi\n" : "t,x,p,h\n");
  const auto old_precision = os.precision(17);
  for (std::size_t i = 0; i < solution.times.size(); ++i) {
    const auto& s = solution.states[i];
    os << solution.times[i];
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      os << ',' << s[j];
    }
    os << ',' << hamiltonian(id, s);
    if (mult) {
      os << ',' << mult_psi(s);
    }
    os << '\n';
  }
  os.precision(old_precision);
}

Trajectory integrate_hamilton(HamiltonianId id, const StateVector& init, double t_final,
                              double tol) {
  const Eigen::Index expected = id == HamiltonianId::Circular ? 2 : 6;
  if (init.size() != expected) {
    throw InvalidDimension("integrate_hamilton: wrong state dimension");
  }
  if (!(tol > 0.0) || !(t_final >= 0.0)) {
    throw std::invalid_argument("integrate_hamilton: need tol > 0 and t_final >= 0");
  }
  if (!init.allFinite()) {
    throw DomainError("integrate_hamilton: non-finite initial state");
  }
  ode::Options opt;
  opt.rtol = tol;
  opt.atol = tol;
  Trajectory traj;
  traj.id = id;
  traj.t_requested = t_final;
  traj.solution = ode::integrate(
      [id](double, const ode::Vector& y, ode::Vector& dy) { hamilton_rhs(id, y, dy); }, 0.0,
      init, t_final, opt);
  return traj;
}

double hj_value_along(const Trajectory& traj, double s0) {
  if (!traj.complete()) {
    throw DomainError("hj_value_along: trajectory ended early (" +
                      std::string(ode::to_string(traj.solution.status)) + ")");
  }
  const auto& sol = traj.solution;
  double integral = 0.0;
  for (std::size_t i = 0; i < sol.steps.size(); ++i) {
    const auto& st = sol.steps[i];
    const double f0 = p_dot_velocity(traj.id, sol.states[i]);
    const double fm = p_dot_velocity(traj.id, st.eval(st.t0 + 0.5 * st.h));
    const double f1 = p_dot_velocity(traj.id, sol.states[i + 1]);
    integral += st.h / 6.0 * (f0 + 4.0 * fm + f1);
  }
  const double h0 = hamiltonian(traj.id, traj.initial_state());
  return s0 - h0 * traj.t_end() + integral;
}

// ---- multiplicative case ---------------------------------------------------

MultState mult_initial_state(Complex lambda0, double x0) {
  if (!(x0 > 0.0) || !std::isfinite(x0)) {
    throw DomainError("mult_initial_state: x0 must be finite and > 0");
  }
  const double a = lambda0.real();
  const double b = lambda0.imag();
  const double denom = std::norm(lambda0 - 1.0) + x0;
  return {0.0, a, b, x0, 2.0 * (a - 1.0) / denom, 2.0 * b / denom, 1.0 / denom};
}

double mult_hamiltonian(const MultState& s) {
  return hamiltonian(HamiltonianId::Multiplicative, s.to_vector());
}

double mult_psi(const MultState& s) { return s.x * s.p_x + 0.5 * (s.a * s.p_a + s.b * s.p_b); }

double mult_psi(const StateVector& y) { return mult_psi(MultState::from_vector(y)); }

double circ_lifetime(Complex lambda, double x0) {
  return CircCharacteristic(lambda, x0).lifetime();
}

LifetimeResult mult_lifetime(Complex lambda0, double x0, double tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("mult_lifetime: tol must be > 0");
  }
  const StateVector init = mult_initial_state(lambda0, x0).to_vector();
  const double t_ref = analytic::T_lambda(lambda0);
  const double horizon = std::isfinite(t_ref) ? 10.0 * t_ref + 10.0 : 1e3;
  const double ode_tol = 1e-12;
  const auto reaches = [&](double t) {
    return integrate_hamilton(HamiltonianId::Multiplicative, init, t, ode_tol).complete();
  };

  const Trajectory probe = integrate_hamilton(HamiltonianId::Multiplicative, init, horizon, ode_tol);
  if (probe.complete()) {
    return {horizon, false};
  }
  const double t_stop = probe.t_end();
  double lo = t_stop;
  double width = 1e-3 * std::max(1.0, t_stop);
  while (!reaches(lo)) {
    lo = std::max(0.0, lo - width);
    width *= 2.0;
  }
  double hi = std::min(horizon, t_stop + 1e-3 * std::max(1.0, t_stop));
  while (hi < horizon && reaches(hi)) {
    lo = hi;
    hi = std::min(horizon, hi + width);
    width *= 2.0;
  }
  while (hi - lo > tol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) {
      break;
    }
    (reaches(mid) ? lo : hi) = mid;
  }
  return {0.5 * (lo + hi), true};
}

double mult_S_formula(const Trajectory& traj) {
  if (traj.id != HamiltonianId::Multiplicative) {
    throw std::logic_error("mult_S_formula: needs a multiplicative trajectory");
  }
  if (!traj.complete()) {
    throw DomainError("mult_S_formula: trajectory ended early");
  }
  const MultState s0 = MultState::from_vector(traj.initial_state());
  const MultState s1 = MultState::from_vector(traj.final_state(), traj.t_end());
  const double l0 = std::abs(s0.lambda());
  const double l1 = std::abs(s1.lambda());
  if (l0 == 0.0 || l1 == 0.0) {
    throw DomainError("mult_S_formula: lambda(0) or lambda(t) is zero");
  }
  const double d = std::norm(s0.lambda() - 1.0) + s0.x;
  return std::log(d) - s0.x * traj.t_end() / (d * d) + std::log(l1) - std::log(l0);
}

// ---- shooting ---------------------------------------------------------------

namespace {

struct FlowEval {
  bool ok = false;
  Eigen::Vector3d residual = Eigen::Vector3d::Zero();
  StateVector final_state;
};

FlowEval flow_residual(const Eigen::Vector3d& z, double t, Complex target, double log_eps,
                       double tol) {
  FlowEval out;
  const double x0 = std::exp(z[2]);
  if (!std::isfinite(x0) || !(x0 > 0.0)) {
    return out;
  }
  const Trajectory traj = integrate_hamilton(
      HamiltonianId::Multiplicative, mult_initial_state({z[0], z[1]}, x0).to_vector(), t, tol);
  if (!traj.complete()) {
    return out;
  }
  const StateVector& y = traj.final_state();
  if (!(y[2] > 0.0)) {
    return out;
  }
  out.ok = true;
  out.final_state = y;
  out.residual << y[0] - target.real(), y[1] - target.imag(), std::log(y[2]) - log_eps;
  return out;
}

struct NewtonOutcome {
  FlowEval eval;
  int iterations = 0;
};

// Damped Newton on the flow residual from z (updated in place); `cur` must be
// a successful evaluation at z.
NewtonOutcome newton_solve(Eigen::Vector3d& z, FlowEval cur, double t, Complex target,
                           double log_eps, double tol, double itol, int max_iterations) {
  const double fd = 1e-6;
  NewtonOutcome out;
  for (int iter = 0; iter < max_iterations; ++iter) {
    if (cur.residual.lpNorm<Eigen::Infinity>() <= tol) {
      break;
    }
    Eigen::Matrix3d jac;
    bool jac_ok = true;
    for (int j = 0; j < 3 && jac_ok; ++j) {
      Eigen::Vector3d zp = z;
      Eigen::Vector3d zm = z;
      zp[j] += fd;
      zm[j] -= fd;
      const FlowEval fp = flow_residual(zp, t, target, log_eps, itol);
      const FlowEval fm = flow_residual(zm, t, target, log_eps, itol);
      if (fp.ok && fm.ok) {
        jac.col(j) = (fp.residual - fm.residual) / (2.0 * fd);
      } else if (fm.ok) {
        jac.col(j) = (cur.residual - fm.residual) / fd;
      } else if (fp.ok) {
        jac.col(j) = (fp.residual - cur.residual) / fd;
      } else {
        jac_ok = false;
      }
    }
    if (!jac_ok) {
      break;
    }
    const Eigen::Vector3d step = jac.fullPivLu().solve(-cur.residual);
    if (!step.allFinite()) {
      break;
    }
    const double norm0 = cur.residual.norm();
    bool accepted = false;
    for (double alpha = 1.0; alpha > 1e-6; alpha *= 0.5) {
      const Eigen::Vector3d trial = z + alpha * step;
      FlowEval next = flow_residual(trial, t, target, log_eps, itol);
      if (next.ok && next.residual.norm() < norm0) {
        z = trial;
        cur = std::move(next);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      break;
    }
    out.iterations = iter + 1;
  }
  out.eval = std::move(cur);
  return out;
}

}  // namespace

ShootingResult shoot_inside(double t, Complex lambda, double epsilon,
                            const ShootingOptions& options) {
  if (!(t > 0.0) || !analytic::in_sigma(t, lambda)) {
    throw DomainError("shoot_inside: target must lie in Sigma_t");
  }
  if (!(epsilon > 0.0)) {
    throw DomainError("shoot_inside: epsilon must be > 0");
  }
  const double log_eps = std::log(epsilon);
  const double itol = options.integrator_tol;
  Eigen::Vector3d z(lambda.real(), lambda.imag(), std::log(t - analytic::T_lambda(lambda)));

  ShootingResult result;
  FlowEval cur = flow_residual(z, t, lambda, log_eps, itol);
  // The seed can overshoot the lifetime; back off in x0 until the flow
  // reaches time t.
  for (int i = 0; i < 60 && !cur.ok; ++i) {
    z[2] += 0.25;
    cur = flow_residual(z, t, lambda, log_eps, itol);
  }
  if (!cur.ok) {
    result.residual = std::numeric_limits<double>::infinity();
    return result;
  }

  // Continuation in log x(t): walk the target from the value reached by the
  // seed to log(epsilon) in stages of at most one decade, so that each Newton
  // solve starts close to its root.
  const double log_start = std::log(cur.final_state[2]);
  const double decade = std::log(10.0);
  const int stages = std::max(1, static_cast<int>(std::ceil(std::abs(log_start - log_eps) / decade)));
  for (int k = 1; k <= stages; ++k) {
    const double stage_log = log_start + (log_eps - log_start) * k / stages;
    const bool last = k == stages;
    FlowEval start = flow_residual(z, t, lambda, stage_log, itol);
    if (!start.ok) {
      break;
    }
    NewtonOutcome solved = newton_solve(z, std::move(start), t, lambda, stage_log,
                                        last ? options.tol : 1e-8, itol, options.max_iterations);
    result.iterations += solved.iterations;
    cur = std::move(solved.eval);
  }

  // Measured against the final target even if a stage broke off early.
  const StateVector& y = cur.final_state;
  cur.residual << y[0] - lambda.real(), y[1] - lambda.imag(), std::log(y[2]) - log_eps;
  result.lambda0 = {z[0], z[1]};
  result.x0 = std::exp(z[2]);
  result.lambda_t = {y[0], y[1]};
  result.x_t = y[2];
  result.p_a_t = y[3];
  result.p_b_t = y[4];
  result.p_x_t = y[5];
  result.residual = cur.residual.lpNorm<Eigen::Infinity>();
  result.converged = result.residual <= options.tol;
  return result;
}

double shoot_radial_derivative(double t, Complex lambda, const ShootingOptions& options) {
  const std::vector<double> eps = {1e-4, 1e-5, 1e-6};
  std::vector<double> values;
  for (double e : eps) {
    const ShootingResult r = shoot_inside(t, lambda, e, options);
    if (!r.converged) {
      std::ostringstream os;
      os << "shoot_radial_derivative: shooting to lambda=" << lambda << " at eps=" << e
         << " did not converge (residual " << r.residual << ")";
      throw NonConvergence(os.str());
    }
    values.push_back(r.radial_derivative());
  }
  return richardson_sqrt(eps, values);
}

}  // namespace brownflow::hj
