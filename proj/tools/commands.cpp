#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>

#include "brownflow/brown_analytic.hpp"
#include "brownflow/checks.hpp"
#include "brownflow/ensembles.hpp"
#include "brownflow/error.hpp"
#include "brownflow/hj_engine.hpp"
#include "brownflow/linalg.hpp"
#include "cli.hpp"

namespace brownflow::cli {

using nlohmann::ordered_json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class Writer>
void emit(const RunConfig& c, std::ostream& out, Writer&& write) {
  if (c.output.empty()) {
    write(out);
    return;
  }
  std::ofstream f(c.output);
  if (!f) {
    throw UsageError("cannot write output file '" + c.output + "'");
  }
  try {
    write(f);
  } catch (const UsageError&) {
    throw UsageError("write failed for '" + c.output + "'");
  }
  f.close();
  if (!f) {
    throw UsageError("write failed for '" + c.output + "'");
  }
}

void emit_table(const RunConfig& c, const Table& table, std::ostream& out) {
  emit(c, out, [&](std::ostream& os) { write_table(c, table, os); });
}

ensembles::BmPathSpec path_spec(const RunConfig& c, ensembles::BmKind kind) {
  return {kind, c.n, c.t, c.steps()};
}

Table points_table(const std::vector<Complex>& points, bool with_logs) {
  Table table;
  table.columns = {"re", "im"};
  if (with_logs) {
    table.columns.insert(table.columns.end(), {"log_modulus", "arg"});
  }
  table.rows.reserve(points.size());
  for (const Complex& z : points) {
    if (with_logs) {
      table.rows.push_back({z.real(), z.imag(), std::log(std::abs(z)), std::arg(z)});
    } else {
      table.rows.push_back({z.real(), z.imag()});
    }
  }
  table.extras["points"] = points.size();
  return table;
}

// ---- compare ---------------------------------------------------------------

std::vector<std::string> default_checks(const std::string& ensemble) {
  if (ensemble == "gue") return {"semicircle"};
  if (ensemble == "ginibre" || ensemble == "ginibre-bm") return {"circular"};
  if (ensemble == "unitary-bm") return {"unitary-support"};
  if (ensemble == "gl-bm") return {"sigma", "pushforward", "log-bands"};
  if (ensemble == "nilpotent-demo") return {"ring"};
  throw UsageError("compare: --check all needs a known --ensemble, got '" + ensemble + "'");
}

checks::CheckResult run_check(const std::string& name, const std::vector<Complex>& points,
                              const RunConfig& c) {
  if (name == "semicircle") {
    std::vector<double> re;
    re.reserve(points.size());
    for (const Complex& z : points) re.push_back(z.real());
    return checks::semicircle_law(re);
  }
  if (name == "circular") {
    return checks::circular_law(points, c.ensemble == "ginibre" ? 1.0 : c.t);
  }
  if (name == "sigma") return checks::sigma_membership(points, c.t);
  if (name == "unitary-support") return checks::unitary_support(points, c.t);
  if (name == "pushforward") {
    return checks::pushforward_support(points, analytic::SigmaDomain(c.t, c.theta_resolution));
  }
  if (name == "log-bands") {
    return checks::log_bands(points, analytic::SigmaDomain(c.t, c.theta_resolution));
  }
  if (name == "ring") return checks::unit_circle_ring(points);
  throw UsageError("compare: unknown check '" + name + "'");
}

ordered_json report_checks(const std::vector<std::string>& names,
                           const std::vector<Complex>& points, const RunConfig& c,
                           bool& all_passed) {
  ordered_json list = ordered_json::array();
  all_passed = true;
  std::set<std::string> used_tolerances;
  for (const std::string& name : names) {
    checks::CheckResult r = run_check(name, points, c);
    ordered_json metrics = ordered_json::array();
    for (checks::Metric& m : r.metrics) {
      const std::string key = name + "." + m.name;
      if (const auto it = c.tolerances.find(key); it != c.tolerances.end()) {
        m.threshold = it->second;
        used_tolerances.insert(key);
      }
      metrics.push_back({{"name", m.name},
                         {"value", m.value},
                         {"relation", checks::to_string(m.relation)},
                         {"threshold", m.threshold},
                         {"passed", m.passed()}});
    }
    ordered_json info = ordered_json::object();
    for (const auto& [k, v] : r.info) info[k] = v;
    all_passed = all_passed && r.passed();
    list.push_back({{"check", name}, {"passed", r.passed()}, {"metrics", metrics}, {"info", info}});
  }
  for (const auto& [key, value] : c.tolerances) {
    if (!used_tolerances.count(key)) {
      throw UsageError("compare: tolerance '" + key + "' does not name a metric of this run");
    }
  }
  ordered_json report;
  report["passed"] = all_passed;
  report["points"] = points.size();
  report["checks"] = list;
  return report;
}

// ---- hj ------------------------------------------------------------------

Table circular_trajectory(const RunConfig& c) {
  const hj::CircCharacteristic ch(c.lambda(), c.x0.value_or(1.0));
  hj::StateVector init(2);
  init << ch.x0, ch.p0();
  const hj::Trajectory traj = hj::integrate_hamilton(hj::HamiltonianId::Circular, init, c.t, 1e-12);
  Table table;
  table.columns = {"t", "x", "p", "h", "x_exact", "p_exact"};
  for (std::size_t i = 0; i < traj.solution.times.size(); ++i) {
    const double ti = traj.solution.times[i];
    const auto& s = traj.solution.states[i];
    const bool alive = ti < ch.lifetime();
    table.rows.push_back({ti, s[0], s[1], hj::hamiltonian(hj::HamiltonianId::Circular, s),
                          alive ? hj::circ_x_of_t(ch, ti) : kNaN,
                          alive ? hj::circ_p_of_t(ch, ti) : kNaN});
  }
  table.extras["lifetime"] = ch.lifetime();
  table.extras["blew_up"] = traj.blew_up();
  table.extras["max_h_drift"] = traj.max_hamiltonian_drift();
  if (traj.complete() && c.t < ch.lifetime()) {
    const double s0 = std::log(std::norm(ch.lambda) + ch.x0);
    table.extras["s_along"] = hj::hj_value_along(traj, s0);
    table.extras["s_exact"] = hj::circ_S_along(ch, c.t);
  }
  return table;
}

Table multiplicative_trajectory(const RunConfig& c, std::ostream& log) {
  const double x0 = c.x0.value_or(1.0);
  const hj::MultState init = hj::mult_initial_state(c.lambda(), x0);
  const hj::Trajectory traj =
      hj::integrate_hamilton(hj::HamiltonianId::Multiplicative, init.to_vector(), c.t, 1e-12);
  Table table;
  table.columns = {"t", "a", "b", "x", "p_a", "p_b", "p_x", "h", "psi"};
  for (std::size_t i = 0; i < traj.solution.times.size(); ++i) {
    const auto& s = traj.solution.states[i];
    table.rows.push_back({traj.solution.times[i], s[0], s[1], s[2], s[3], s[4], s[5],
                          hj::hamiltonian(hj::HamiltonianId::Multiplicative, s), hj::mult_psi(s)});
  }
  const hj::LifetimeResult life = hj::mult_lifetime(c.lambda(), x0);
  table.extras["lifetime"] = life.time;
  table.extras["lifetime_found"] = life.found;
  table.extras["blew_up"] = traj.blew_up();
  table.extras["max_h_drift"] = traj.max_hamiltonian_drift();
  table.extras["max_psi_drift"] = traj.max_psi_drift();
  if (traj.blew_up()) {
    log << "warning: trajectory left the domain at t=" << traj.t_end() << " before t=" << c.t
        << '\n';
  } else if (c.lambda() != Complex{}) {
    table.extras["s_formula"] = hj::mult_S_formula(traj);
  }
  return table;
}

Table lifetime_scan(const RunConfig& c) {
  const double x0 = c.x0.value_or(1e-6);
  Table table;
  table.columns = {"theta", "lifetime", "t_lambda", "abs_error", "found"};
  double worst = 0.0;
  for (int j = 0; j < c.bins; ++j) {
    const double theta = -kPi + 2.0 * kPi * (j + 0.5) / c.bins;
    const hj::LifetimeResult life = hj::mult_lifetime(std::polar(1.0, theta), x0);
    const double expected = 2.0 - 2.0 * std::cos(theta);
    const double err = std::abs(life.time - expected);
    worst = std::max(worst, err);
    table.rows.push_back({theta, life.time, expected, err, life.found ? 1.0 : 0.0});
  }
  table.extras["x0"] = x0;
  table.extras["max_abs_error"] = worst;
  return table;
}

Table shooting_table(const RunConfig& c, std::ostream& log, bool& all_converged) {
  std::vector<Complex> targets = c.targets;
  if (targets.empty()) {
    targets = {Complex(1.0), std::exp(Complex(0.2)), std::exp(Complex(-0.2)),
               std::exp(Complex(0.1, 0.3))};
  }
  const analytic::SigmaDomain domain(c.t, c.theta_resolution);
  const std::vector<double> eps = {1e-4, 1e-5, 1e-6};
  Table table;
  table.columns = {"re",     "im", "converged", "residual", "ds_drho_shooting", "ds_drho_exact",
                   "ds_dtheta_shooting", "ds_dtheta_exact"};
  all_converged = true;
  for (const Complex& z : targets) {
    std::vector<double> radial;
    std::vector<double> angular;
    double residual = 0.0;
    bool ok = true;
    try {
      for (double e : eps) {
        const hj::ShootingResult r = hj::shoot_inside(c.t, z, e);
        residual = std::max(residual, r.residual);
        if (!r.converged) {
          throw NonConvergence("residual " + std::to_string(r.residual) + " at eps " +
                               std::to_string(e));
        }
        radial.push_back(r.radial_derivative());
        angular.push_back(r.angular_derivative());
      }
    } catch (const std::exception& e) {
      ok = false;
      all_converged = false;
      log << "shooting to " << z << " failed: " << e.what() << '\n';
    }
    double exact_rho = kNaN;
    double exact_theta = kNaN;
    if (analytic::in_sigma(c.t, z)) {
      exact_rho = analytic::ds_drho(c.t, z);
      exact_theta = analytic::ds_dtheta(domain, z);
    }
    table.rows.push_back({z.real(), z.imag(), ok ? 1.0 : 0.0, ok ? residual : kNaN,
                          ok ? hj::richardson_sqrt(eps, radial) : kNaN, exact_rho,
                          ok ? hj::richardson_sqrt(eps, angular) : kNaN, exact_theta});
  }
  return table;
}

// ---- density -----------------------------------------------------------------

Table density_table(const RunConfig& c, std::ostream& log) {
  Table table;
  const int m = c.bins;
  if (c.density == "semicircle") {
    table.columns = {"x", "density"};
    for (int i = 0; i < m; ++i) {
      const double x = -2.2 + 4.4 * i / (m - 1);
      table.rows.push_back({x, analytic::semicircle_density(x)});
    }
    table.extras["total_mass"] = analytic::semicircle_cdf(2.2) - analytic::semicircle_cdf(-2.2);
    return table;
  }
  if (c.density == "circular") {
    table.columns = {"re", "im", "s", "density"};
    const double half = 1.2 * std::sqrt(c.t);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const Complex z(-half + 2.0 * half * i / (m - 1), -half + 2.0 * half * j / (m - 1));
        table.rows.push_back({z.real(), z.imag(), analytic::circular_s(c.t, z),
                              analytic::circular_brown_density(c.t, z)});
      }
    }
    const auto mass = analytic::integrate_density({analytic::DensityKind::Circular, c.t});
    table.extras["total_mass"] = mass.value;
    return table;
  }
  if (c.density == "multiplicative" || c.density == "multiplicative-grid") {
    const analytic::SigmaDomain domain(c.t, c.theta_resolution);
    if (c.density == "multiplicative") {
      table.columns = {"theta", "r_inner", "r_outer", "w_t"};
      for (const analytic::ProfileRow& row : domain.profile()) {
        double w = kNaN;
        try {
          w = analytic::w_t(domain, row.theta);
        } catch (const DomainError& e) {
          log << "w_t undefined at theta=" << row.theta << ": " << e.what() << '\n';
        }
        table.rows.push_back({row.theta, row.r_inner, row.r_outer, w});
      }
    } else {
      table.columns = {"re", "im", "density"};
      double reach = 1.0;
      for (const analytic::ProfileRow& row : domain.profile()) reach = std::max(reach, row.r_outer);
      const double half = 1.05 * reach;
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          const Complex z(-half + 2.0 * half * i / (m - 1), -half + 2.0 * half * j / (m - 1));
          table.rows.push_back({z.real(), z.imag(), analytic::mult_brown_density(domain, z)});
        }
      }
    }
    const auto mass = analytic::integrate_density({analytic::DensityKind::Multiplicative, c.t});
    table.extras["total_mass"] = mass.value;
    table.extras["theta_extent"] = domain.theta_extent();
    table.extras["topology"] = domain.topology() == analytic::Topology::DoublyConnected
                                   ? "doubly-connected"
                                   : "simply-connected";
    return table;
  }
  throw UsageError("density: unknown kind '" + c.density + "'");
}

}  // namespace

std::vector<Complex> sample_points(const RunConfig& c, std::ostream& log) {
  using ensembles::BmKind;
  if (c.ensemble.empty()) {
    throw UsageError("missing --ensemble");
  }
  std::vector<Complex> points;
  points.reserve(static_cast<std::size_t>(c.n) * static_cast<std::size_t>(c.samples));
  for (int j = 0; j < c.samples; ++j) {
    const RngHandle rng{c.seed, static_cast<std::uint64_t>(j)};
    const std::string id = c.ensemble + " sample " + std::to_string(j);
    ComplexMatrix m;
    if (c.ensemble == "gue") {
      for (double v : linalg::hermitian_eigenvalues(ensembles::sample_gue(c.n, rng))) {
        points.emplace_back(v, 0.0);
      }
      continue;
    } else if (c.ensemble == "ginibre") {
      m = ensembles::sample_ginibre(c.n, rng);
    } else if (c.ensemble == "ginibre-bm") {
      m = ensembles::ginibre_bm_endpoint(path_spec(c, BmKind::AdditiveGinibre), rng);
    } else if (c.ensemble == "unitary-bm") {
      m = ensembles::sample_unitary_bm(path_spec(c, BmKind::Unitary), rng);
    } else if (c.ensemble == "gl-bm") {
      ensembles::GlSample g = ensembles::sample_gl_bm(path_spec(c, BmKind::GeneralLinear), rng);
      if (g.resample_warning) {
        log << "warning: " << id << " is nearly singular (rcond " << g.rcond << ")\n";
      }
      m = std::move(g.value);
    } else if (c.ensemble == "nilpotent-demo") {
      m = ensembles::nilpotent_plus_noise(c.n, c.epsilon, rng);
    } else {
      throw UsageError("unknown ensemble '" + c.ensemble + "'");
    }
    const auto ev = linalg::general_eigenvalues(m, id);
    points.insert(points.end(), ev.begin(), ev.end());
  }
  return points;
}

int cmd_sample(const RunConfig& c, std::ostream& out, std::ostream& log) {
  emit_table(c, points_table(sample_points(c, log), false), out);
  return kOk;
}

int cmd_density(const RunConfig& c, std::ostream& out, std::ostream& log) {
  emit_table(c, density_table(c, log), out);
  return kOk;
}

int cmd_compare(const RunConfig& c, std::ostream& out, std::ostream& log) {
  if (c.input.empty() && c.ensemble.empty()) {
    throw UsageError("compare: needs --input FILE or --ensemble NAME");
  }
  const std::vector<Complex> points =
      c.input.empty() ? sample_points(c, log) : read_points_csv(c.input);
  const std::vector<std::string> names =
      c.check == "all" ? default_checks(c.ensemble) : std::vector<std::string>{c.check};
  bool passed = false;
  ordered_json report = report_checks(names, points, c, passed);
  emit(c, out, [&](std::ostream& os) { write_json(c, report, os); });
  return passed ? kOk : kComparisonFailed;
}

int cmd_hj(const RunConfig& c, std::ostream& out, std::ostream& log) {
  if (c.mode == "circular") {
    emit_table(c, circular_trajectory(c), out);
    return kOk;
  }
  if (c.mode == "multiplicative") {
    emit_table(c, multiplicative_trajectory(c, log), out);
    return kOk;
  }
  if (c.mode == "lifetime-scan") {
    emit_table(c, lifetime_scan(c), out);
    return kOk;
  }
  if (c.mode == "shoot") {
    bool all_converged = true;
    emit_table(c, shooting_table(c, log, all_converged), out);
    return all_converged ? kOk : kNumeric;
  }
  throw UsageError("hj: unknown mode '" + c.mode + "'");
}

// ---- presets ---------------------------------------------------------------

namespace {

struct Preset {
  std::string name;
  std::function<int(const RunConfig&, const std::filesystem::path&, std::ostream&, std::ostream&)>
      run;
};

RunConfig child(const RunConfig& base, const std::filesystem::path& dir, const std::string& file) {
  RunConfig c = base;
  c.output = (dir / file).string();
  c.format = file.ends_with(".json") ? "json" : "csv";
  return c;
}

int sample_file(RunConfig c, const std::string& ensemble, double t,
                const std::filesystem::path& dir, const std::string& file, std::ostream& out,
                std::ostream& log) {
  c = child(c, dir, file);
  c.command = "sample";
  c.ensemble = ensemble;
  c.t = t;
  const int code = cmd_sample(c, out, log);
  log << "wrote " << c.output << '\n';
  return code;
}

int density_file(RunConfig c, const std::string& kind, double t, const std::filesystem::path& dir,
                 const std::string& file, std::ostream& out, std::ostream& log) {
  c = child(c, dir, file);
  c.command = "density";
  c.density = kind;
  c.t = t;
  const int code = cmd_density(c, out, log);
  log << "wrote " << c.output << '\n';
  return code;
}

// Samples once, writes the cloud, and runs `names` on that same cloud.
int sample_and_compare(RunConfig c, double t, const std::vector<std::string>& names,
                       bool with_logs, const std::filesystem::path& dir, std::ostream& out,
                       std::ostream& log, std::vector<Complex>* keep = nullptr) {
  c.command = "sample";
  c.ensemble = "gl-bm";
  c.t = t;
  const std::vector<Complex> points = sample_points(c, log);
  const RunConfig sc = child(c, dir, c.preset + "-eigenvalues.csv");
  emit_table(sc, points_table(points, with_logs), out);
  log << "wrote " << sc.output << '\n';
  RunConfig rc = child(c, dir, c.preset + "-report.json");
  rc.command = "compare";
  bool passed = false;
  const ordered_json report = report_checks(names, points, rc, passed);
  emit(rc, out, [&](std::ostream& os) { write_json(rc, report, os); });
  log << "wrote " << rc.output << (passed ? " (pass)" : " (FAIL)") << '\n';
  if (keep) *keep = points;
  return passed ? kOk : kComparisonFailed;
}

const std::vector<Preset>& presets() {
  using std::filesystem::path;
  static const std::vector<Preset> all = {
      {"fig-guehist",
       [](const RunConfig& c, const path& d, std::ostream& o, std::ostream& l) {
         return sample_file(c, "gue", 1.0, d, "fig-guehist.csv", o, l);
       }},
      {"fig-ginibreplot",
       [](const RunConfig& c, const path& d, std::ostream& o, std::ostream& l) {
         return sample_file(c, "ginibre", 1.0, d, "fig-ginibreplot.csv", o, l);
       }},
      {"fig-t01",
       [](const RunConfig& c, const path& d, std::ostream& o, std::ostream& l) {
         return sample_file(c, "gl-bm", 0.1, d, "fig-t01.csv", o, l);
       }},
      {"fig-t2and39",
       [](const RunConfig& c, const path& d, std::ostream& o, std::ostream& l) {
         return std::max(sample_file(c, "gl-bm", 2.0, d, "fig-t2and39-t2.csv", o, l),
                         sample_file(c, "gl-bm", 3.9, d, "fig-t2and39-t3.9.csv", o, l));
       }},
      {"fig-t4and41",
       [](const RunConfig& c, const path& d, std::ostream& o, std::ostream& l) {
         return std::max(sample_file(c, "gl-bm", 4.0, d, "fig-t4and41-t4.csv", o, l),
                         sample_file(c, "gl-bm", 4.1, d, "fig-t4and41-t4.1.csv", o, l));
       }},
      {"fig-perturb1",
       [](const RunConfig& c, const path& d, std::ostream& o, std::ostream& l) {
         RunConfig e = c;
         e.epsilon = 1e-5;
         return sample_file(e, "nilpotent-demo", 1.0, d, "fig-perturb1.csv", o, l);
       }},
      {"fig-splot3d",
       [](const RunConfig& c, const path& d, std::ostream& o, std::ostream& l) {
         RunConfig e = c;
         e.bins = 81;
         return density_file(e, "circular", 1.0, d, "fig-splot3d.csv", o, l);
       }},
      {"fig-wtplots",
       [](const RunConfig& c, const path& d, std::ostream& o, std::ostream& l) {
         int code = kOk;
         for (const auto& [t, tag] : std::vector<std::pair<double, std::string>>{
                  {2.0, "2"}, {3.5, "3.5"}, {4.0, "4"}, {7.0, "7"}}) {
           code = std::max(code, density_file(c, "multiplicative", t, d,
                                              "fig-wtplots-t" + tag + ".csv", o, l));
         }
         return code;
       }},
      {"fig-w3d",
       [](const RunConfig& c, const path& d, std::ostream& o, std::ostream& l) {
         RunConfig e = c;
         e.bins = 81;
         return std::max(density_file(e, "multiplicative-grid", 1.0, d, "fig-w3d-grid.csv", o, l),
                         density_file(e, "multiplicative", 1.0, d, "fig-w3d-profile.csv", o, l));
       }},
      {"fig-3dplotwithhist",
       [](const RunConfig& c, const path& d, std::ostream& o, std::ostream& l) {
         RunConfig e = c;
         e.bins = 81;
         const int a = density_file(e, "multiplicative-grid", 1.0, d,
                                    "fig-3dplotwithhist-density.csv", o, l);
         return std::max(a, sample_file(c, "gl-bm", 1.0, d, "fig-3dplotwithhist-eigenvalues.csv",
                                        o, l));
       }},
      {"fig-evalsandlogs",
       [](const RunConfig& c, const path& d, std::ostream& o, std::ostream& l) {
         return sample_and_compare(c, 4.1, {"sigma", "log-bands"}, true, d, o, l);
       }},
      {"fig-bianeevals",
       [](const RunConfig& c, const path& d, std::ostream& o, std::ostream& l) {
         std::vector<Complex> points;
         const int code = sample_and_compare(c, 2.0, {"pushforward"}, false, d, o, l, &points);
         RunConfig pc = child(c, d, "fig-bianeevals-angles.csv");
         pc.t = 2.0;
         const analytic::SigmaDomain domain(2.0, c.theta_resolution);
         Table angles;
         angles.columns = {"theta"};
         for (const Complex& z : points) {
           if (z != Complex{}) angles.rows.push_back({std::arg(analytic::phi_t_extended(domain, z))});
         }
         emit_table(pc, angles, o);
         l << "wrote " << pc.output << '\n';
         RunConfig hc = child(c, d, "fig-bianeevals-biane.csv");
         hc.t = 2.0;
         const analytic::AngularHistogram h = analytic::pushforward_histogram(domain, 90);
         Table hist;
         hist.columns = {"bin_lo", "bin_hi", "mass"};
         for (std::size_t i = 0; i < h.masses.size(); ++i) {
           hist.rows.push_back({h.edges[i], h.edges[i + 1], h.masses[i]});
         }
         hist.extras["support_theta_max"] = analytic::biane_support(2.0).theta_max;
         emit_table(hc, hist, o);
         l << "wrote " << hc.output << '\n';
         return code;
       }},
  };
  return all;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const Preset& p : presets()) names.push_back(p.name);
  return names;
}

int cmd_preset(const RunConfig& c, std::ostream& out, std::ostream& log) {
  const auto& all = presets();
  const auto it = std::find_if(all.begin(), all.end(), [&](const Preset& p) { return p.name == c.preset; });
  if (it == all.end()) {
    throw UsageError("unknown preset '" + c.preset + "'");
  }
  const std::filesystem::path dir = c.output.empty() ? "." : c.output;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw UsageError("cannot create output directory '" + dir.string() + "': " + ec.message());
  }
  RunConfig base = c;
  base.samples = 1;
  if (!c.explicit_keys.count("n")) base.n = 2000;
  return it->run(base, dir, out, log);
}

}  // namespace brownflow::cli
