#include "brownflow/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace brownflow::ode {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
// Difference between the 5th and embedded 4th order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense output (Hairer's contd5 coefficients).
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

double error_norm(const Vector& err, const Vector& y0, const Vector& y1, const Options& o) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sk = o.atol + o.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / sk;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(std::max<Eigen::Index>(1, err.size())));
}

// Starting step from the scale of y and f(t0, y0) (Hairer & Wanner II.4).
double initial_step(const Rhs& f, double t0, const Vector& y0, const Vector& f0,
                    double span, const Options& o) {
  const Vector sk = (o.atol + o.rtol * y0.array().abs()).matrix();
  const double n = static_cast<double>(std::max<Eigen::Index>(1, y0.size()));
  const double d0 = std::sqrt((y0.array() / sk.array()).square().sum() / n);
  const double d1n = std::sqrt((f0.array() / sk.array()).square().sum() / n);
  double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
  h0 = std::min(h0, span);
  const Vector y1 = y0 + h0 * f0;
  Vector f1(y0.size());
  f(t0 + h0, y1, f1);
  const double d2 = std::sqrt(((f1 - f0).array() / sk.array()).square().sum() / n) / h0;
  const double dm = std::max(d1n, d2);
  const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
  return std::min({100.0 * h0, h1, span});
}

}  // namespace

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Completed:
      return "completed";
    case Status::BlowUp:
      return "blow-up";
    case Status::StepUnderflow:
      return "step-underflow";
    case Status::MaxSteps:
      return "max-steps";
  }
  return "unknown";
}

Vector DenseStep::eval(double t) const {
  const double s = (t - t0) / h;
  const double s1 = 1.0 - s;
  return c0 + s * (c1 + s1 * (c2 + s * (c3 + s1 * c4)));
}

Vector Solution::at(double t) const {
  if (times.empty() || t < times.front() || t > times.back()) {
    throw std::out_of_range("ode::Solution::at: time outside the integrated range");
  }
  if (steps.empty() || t == times.back()) {
    return states.back();
  }
  auto it = std::upper_bound(times.begin(), times.end(), t);
  auto idx = static_cast<std::size_t>(std::distance(times.begin(), it)) - 1;
  idx = std::min(idx, steps.size() - 1);
  return steps[idx].eval(t);
}

Solution integrate(const Rhs& f, double t0, const Vector& y0, double t1, const Options& o) {
  if (!(t1 >= t0)) {
    throw std::invalid_argument("ode::integrate: t1 must be >= t0");
  }
  if (!(o.rtol > 0.0) || !(o.atol >= 0.0)) {
    throw std::invalid_argument("ode::integrate: tolerances must be positive");
  }
  Solution sol;
  sol.times.push_back(t0);
  sol.states.push_back(y0);
  if (!y0.allFinite()) {
    sol.status = Status::BlowUp;
    return sol;
  }
  if (t1 == t0) {
    return sol;
  }

  const Eigen::Index n = y0.size();
  Vector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);
  Vector y = y0;
  double t = t0;
  f(t, y, k1);

  const double span = t1 - t0;
  double h = o.initial_step > 0.0 ? o.initial_step : initial_step(f, t0, y0, k1, span, o);
  if (o.max_step > 0.0) {
    h = std::min(h, o.max_step);
  }
  bool last_rejected = false;

  for (long step = 0;; ++step) {
    if (step >= o.max_steps) {
      sol.status = Status::MaxSteps;
      return sol;
    }
    if (h < o.min_step_factor * std::max(1.0, std::abs(t))) {
      sol.status = Status::StepUnderflow;
      return sol;
    }
    bool final_step = false;
    if (t + h >= t1 || t + 1.01 * h >= t1) {
      h = t1 - t;
      final_step = true;
    }

    ytmp = y + h * a21 * k1;
    f(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    f(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + h, ytmp, k6);
    ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    f(t + h, ynew, k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double en = error_norm(err, y, ynew, o);
    if (!std::isfinite(en) || !ynew.allFinite() || !k7.allFinite()) {
      en = 1e10;
    }

    if (en <= 1.0) {
      DenseStep ds;
      ds.t0 = t;
      ds.h = h;
      ds.c0 = y;
      ds.c1 = ynew - y;
      ds.c2 = h * k1 - ds.c1;
      ds.c3 = ds.c1 - h * k7 - ds.c2;
      ds.c4 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

      t = final_step ? t1 : t + h;
      y = ynew;
      k1 = k7;
      sol.times.push_back(t);
      sol.states.push_back(y);
      sol.steps.push_back(std::move(ds));

      if (y.lpNorm<Eigen::Infinity>() > o.blowup_norm) {
        sol.status = Status::BlowUp;
        return sol;
      }
      if (final_step) {
        sol.status = Status::Completed;
        return sol;
      }
      double fac = 0.9 * std::pow(std::max(en, 1e-10), -0.2);
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
      h *= fac;
      last_rejected = false;
    } else {
      ++sol.rejected;
      const double fac = std::clamp(0.9 * std::pow(en, -0.2), 0.1, 0.9);
      h *= fac;
      last_rejected = true;
    }
    if (o.max_step > 0.0) {
      h = std::min(h, o.max_step);
    }
  }
}

}  // namespace brownflow::ode
