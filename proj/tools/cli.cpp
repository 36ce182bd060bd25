#include <functional>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "brownflow/error.hpp"
#include "cli.hpp"

namespace brownflow::cli {

namespace {

// Applies a flag to the config only when it appeared on the command line, so
// that config-file values survive otherwise.
using Override = std::function<void(RunConfig&)>;

template <class T>
void bind_option(CLI::App* app, std::vector<Override>& overrides, const std::string& flags,
                 T RunConfig::*field, const std::string& key, const std::string& help) {
  auto storage = std::make_shared<T>();
  CLI::Option* opt = app->add_option(flags, *storage, help);
  overrides.push_back([opt, storage, field, key](RunConfig& c) {
    if (opt->count() > 0) {
      c.*field = *storage;
      c.explicit_keys.insert(key);
    }
  });
}

struct Common {
  std::string config_path;
  std::vector<Override> overrides;
  std::shared_ptr<std::uint64_t> seed = std::make_shared<std::uint64_t>(0);
  std::vector<CLI::Option*> seed_opts;

  bool seed_given() const {
    for (const CLI::Option* o : seed_opts) {
      if (o->count() > 0) return true;
    }
    return false;
  }
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "JSON config file (version 1)");
  c.seed_opts.push_back(app->add_option("--seed", *c.seed, "RNG seed (beats BROWNFLOW_SEED and config)"));
  bind_option(app, c.overrides, "-n,--n", &RunConfig::n, "n", "matrix size");
  bind_option(app, c.overrides, "-t,--t", &RunConfig::t, "t", "time parameter");
  bind_option(app, c.overrides, "-k,--k", &RunConfig::k, "k", "path steps (0: 100 per unit time)");
  bind_option(app, c.overrides, "--epsilon", &RunConfig::epsilon, "epsilon", "perturbation size");
  bind_option(app, c.overrides, "--theta-resolution", &RunConfig::theta_resolution, "theta_resolution",
              "rays in the Sigma_t boundary table");
  bind_option(app, c.overrides, "--samples", &RunConfig::samples, "samples", "independent matrices");
  bind_option(app, c.overrides, "--bins", &RunConfig::bins, "bins", "grid points or bins per axis");
  bind_option(app, c.overrides, "-o,--output", &RunConfig::output, "output",
              "output file (directory for presets); standard output if omitted");
  bind_option(app, c.overrides, "--format", &RunConfig::format, "format", "csv or json");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
            const char* env_seed) {
  CLI::App app{"brownflow: Brown measures of matrix Brownian motions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "brownflow 0.1.0");

  Common common;
  std::vector<Override> local;

  CLI::App* sample = app.add_subcommand("sample", "eigenvalue clouds of random matrices");
  add_common(sample, common);
  bind_option(sample, local, "--ensemble", &RunConfig::ensemble, "ensemble",
              "gue, ginibre, ginibre-bm, unitary-bm, gl-bm or nilpotent-demo");

  CLI::App* density = app.add_subcommand("density", "analytic density tables");
  add_common(density, common);
  bind_option(density, local, "--density", &RunConfig::density, "density",
              "semicircle, circular, multiplicative or multiplicative-grid");

  CLI::App* compare = app.add_subcommand("compare", "check eigenvalues against the limit laws");
  add_common(compare, common);
  bind_option(compare, local, "--ensemble", &RunConfig::ensemble, "ensemble", "ensemble to sample");
  bind_option(compare, local, "--input", &RunConfig::input, "input", "CSV with re,im columns");
  bind_option(compare, local, "--check", &RunConfig::check, "check",
              "all, semicircle, circular, sigma, unitary-support, pushforward, log-bands or ring");
  auto tolerance_flags = std::make_shared<std::vector<std::string>>();
  CLI::Option* tol_opt =
      compare->add_option("--tolerance", *tolerance_flags, "override a threshold: check.metric=value");

  CLI::App* hj = app.add_subcommand("hj", "Hamilton-Jacobi characteristics");
  add_common(hj, common);
  bind_option(hj, local, "--mode", &RunConfig::mode, "mode",
              "circular, multiplicative, lifetime-scan or shoot");
  bind_option(hj, local, "--lambda-re", &RunConfig::lambda_re, "lambda", "real part of lambda");
  bind_option(hj, local, "--lambda-im", &RunConfig::lambda_im, "lambda", "imaginary part of lambda");
  auto x0_flag = std::make_shared<double>(0.0);
  CLI::Option* x0_opt = hj->add_option("--x0", *x0_flag, "initial x");
  auto target_flags = std::make_shared<std::vector<std::string>>();
  CLI::Option* target_opt = hj->add_option("--target", *target_flags, "shooting target re,im");

  CLI::App* preset = app.add_subcommand("preset", "reproduce a figure's data files");
  add_common(preset, common);
  auto preset_name = std::make_shared<std::string>();
  preset->add_option("name", *preset_name, "preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, r;
    const int code = app.exit(e, o, r);
    out << o.str();
    err << r.str();
    return code == 0 ? kOk : kUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    RunConfig config;
    std::optional<std::uint64_t> file_seed;
    if (!common.config_path.empty()) {
      config = load_config_file(common.config_path);
      if (config.explicit_keys.count("seed")) file_seed = config.seed;
      if (config.explicit_keys.count("command") && config.command != chosen->get_name()) {
        throw UsageError("config file is for command '" + config.command + "', not '" +
                         chosen->get_name() + "'");
      }
    }
    config.command = chosen->get_name();
    for (const Override& o : common.overrides) o(config);
    for (const Override& o : local) o(config);
    if (x0_opt->count() > 0) config.x0 = *x0_flag;
    if (target_opt->count() > 0) {
      config.targets.clear();
      for (const std::string& s : *target_flags) {
        const auto comma = s.find(',');
        try {
          if (comma == std::string::npos) throw std::invalid_argument(s);
          config.targets.emplace_back(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
        } catch (const std::exception&) {
          throw UsageError("--target expects re,im, got '" + s + "'");
        }
      }
    }
    if (tol_opt->count() > 0) {
      for (const std::string& s : *tolerance_flags) {
        const auto eq = s.find('=');
        try {
          if (eq == std::string::npos) throw std::invalid_argument(s);
          config.tolerances[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
        } catch (const std::exception&) {
          throw UsageError("--tolerance expects check.metric=value, got '" + s + "'");
        }
      }
    }
    if (chosen == preset) config.preset = *preset_name;
    config.seed = resolve_seed(common.seed_given() ? std::optional(*common.seed) : std::nullopt,
                               env_seed, file_seed);
    config.validate();

    if (chosen == sample) return cmd_sample(config, out, err);
    if (chosen == density) return cmd_density(config, out, err);
    if (chosen == compare) return cmd_compare(config, out, err);
    if (chosen == hj) return cmd_hj(config, out, err);
    return cmd_preset(config, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NonConvergence& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  }
}

}  // namespace brownflow::cli
