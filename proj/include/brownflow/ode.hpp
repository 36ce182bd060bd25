#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

// Adaptive Dormand-Prince 5(4) integrator with continuous (dense) output.
namespace brownflow::ode {

using Vector = Eigen::VectorXd;
using Rhs = std::function<void(double t, const Vector& y, Vector& dydt)>;

struct Options {
  double rtol = 1e-10;
  double atol = 1e-10;
  /// First trial step; 0 picks one from the derivative scale.
  double initial_step = 0.0;
  /// Largest allowed step; 0 means unbounded.
  double max_step = 0.0;
  /// Integration stops with Status::BlowUp once the max-norm of the state
  /// exceeds this.
  double blowup_norm = 1e12;
  /// Integration stops with Status::StepUnderflow once the step falls
  /// below min_step_factor * max(1, |t|).
  double min_step_factor = 1e-14;
  long max_steps = 2'000'000;
};

enum class Status { Completed, BlowUp, StepUnderflow, MaxSteps };

std::string_view to_string(Status s);

/// One accepted step with the coefficients of its quartic interpolant.
struct DenseStep {
  double t0 = 0.0;
  double h = 0.0;
  Vector c0, c1, c2, c3, c4;

  Vector eval(double t) const;
};

struct Solution {
  Status status = Status::Completed;
  std::vector<double> times;   // t_0 < t_1 < ... ; times.front() is the start
  std::vector<Vector> states;  // state at each entry of `times`
  std::vector<DenseStep> steps;  // steps[i] covers [times[i], times[i+1]]
  long rejected = 0;

  bool completed() const { return status == Status::Completed; }
  double t_begin() const { return times.front(); }
  double t_end() const { return times.back(); }
  const Vector& final_state() const { return states.back(); }

  /// Dense-output state at t in [t_begin(), t_end()]. Throws
  /// std::out_of_range outside.
  Vector at(double t) const;
};

/// Integrates y' = f(t, y) from t0 to t1 > t0 (t1 == t0 returns the single
/// starting point). On blow-up or step underflow the partial solution is
/// returned with the corresponding status; nothing is thrown.
Solution integrate(const Rhs& f, double t0, const Vector& y0, double t1,
                   const Options& options = {});

}  // namespace brownflow::ode
