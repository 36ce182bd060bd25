#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "brownflow/ensembles.hpp"
#include "cli.hpp"

namespace brownflow::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <class T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw UsageError("config: wrong type for key '" + key + "'");
  }
}

std::uint64_t parse_seed(const std::string& text, const std::string& what) {
  std::uint64_t value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw UsageError(what + ": not an unsigned integer seed: '" + text + "'");
  }
  return value;
}

Complex parse_pair(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw UsageError("config: '" + key + "' entries must be [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

}  // namespace

int RunConfig::steps() const { return k > 0 ? k : ensembles::default_steps(t); }

void RunConfig::validate() const {
  require(n >= 1, "n must be >= 1");
  require(std::isfinite(t) && t > 0.0, "t must be > 0");
  require(k >= 0, "k must be >= 0");
  require(std::isfinite(epsilon) && epsilon > 0.0, "epsilon must be > 0");
  require(theta_resolution >= 16, "theta_resolution must be >= 16");
  require(samples >= 1, "samples must be >= 1");
  require(bins >= 2, "bins must be >= 2");
  require(format == "csv" || format == "json", "format must be csv or json");
  require(std::isfinite(lambda_re) && std::isfinite(lambda_im), "lambda must be finite");
  require(!x0 || (std::isfinite(*x0) && *x0 > 0.0), "x0 must be > 0");
  for (const Complex& z : targets) {
    require(std::isfinite(z.real()) && std::isfinite(z.imag()), "targets must be finite");
  }
  for (const auto& [key, value] : tolerances) {
    require(key.find('.') != std::string::npos, "tolerance keys look like check.metric: " + key);
    require(std::isfinite(value), "tolerance values must be finite");
  }
}

ordered_json RunConfig::to_json() const {
  ordered_json j;
  j["version"] = kConfigVersion;
  j["command"] = command;
  j["ensemble"] = ensemble;
  j["density"] = density;
  j["check"] = check;
  j["mode"] = mode;
  j["preset"] = preset;
  j["input"] = input;
  j["output"] = output;
  j["format"] = format;
  j["n"] = n;
  j["t"] = t;
  j["k"] = k;
  j["epsilon"] = epsilon;
  j["theta_resolution"] = theta_resolution;
  j["seed"] = seed;
  j["samples"] = samples;
  j["bins"] = bins;
  j["lambda"] = {lambda_re, lambda_im};
  j["x0"] = x0 ? ordered_json(*x0) : ordered_json(nullptr);
  ordered_json tg = ordered_json::array();
  for (const Complex& z : targets) tg.push_back({z.real(), z.imag()});
  j["targets"] = tg;
  ordered_json tol = ordered_json::object();
  for (const auto& [key, value] : tolerances) tol[key] = value;
  j["tolerances"] = tol;
  return j;
}

void apply_json(RunConfig& c, const json& j) {
  require(j.is_object(), "config: top level must be an object");
  require(j.contains("version"), "config: missing 'version'");
  require(j["version"].is_number_integer() && j["version"].get<int>() == kConfigVersion,
          "config: unsupported version (expected " + std::to_string(kConfigVersion) + ")");
  for (const auto& [key, value] : j.items()) {
    if (key == "version") continue;
    if (key == "command") {
      c.command = get_as<std::string>(value, key);
    } else if (key == "ensemble") {
      c.ensemble = get_as<std::string>(value, key);
    } else if (key == "density") {
      c.density = get_as<std::string>(value, key);
    } else if (key == "check") {
      c.check = get_as<std::string>(value, key);
    } else if (key == "mode") {
      c.mode = get_as<std::string>(value, key);
    } else if (key == "preset") {
      c.preset = get_as<std::string>(value, key);
    } else if (key == "input") {
      c.input = get_as<std::string>(value, key);
    } else if (key == "output") {
      c.output = get_as<std::string>(value, key);
    } else if (key == "format") {
      c.format = get_as<std::string>(value, key);
    } else if (key == "n") {
      require(value.is_number_integer(), "config: 'n' must be an integer");
      c.n = value.get<int>();
    } else if (key == "t") {
      c.t = get_as<double>(value, key);
    } else if (key == "k") {
      require(value.is_number_integer(), "config: 'k' must be an integer");
      c.k = value.get<int>();
    } else if (key == "epsilon") {
      c.epsilon = get_as<double>(value, key);
    } else if (key == "theta_resolution") {
      require(value.is_number_integer(), "config: 'theta_resolution' must be an integer");
      c.theta_resolution = value.get<int>();
    } else if (key == "seed") {
      require(value.is_number_unsigned(), "config: 'seed' must be a non-negative integer");
      c.seed = value.get<std::uint64_t>();
    } else if (key == "samples") {
      require(value.is_number_integer(), "config: 'samples' must be an integer");
      c.samples = value.get<int>();
    } else if (key == "bins") {
      require(value.is_number_integer(), "config: 'bins' must be an integer");
      c.bins = value.get<int>();
    } else if (key == "lambda") {
      const Complex z = parse_pair(value, key);
      c.lambda_re = z.real();
      c.lambda_im = z.imag();
    } else if (key == "x0") {
      c.x0 = value.is_null() ? std::nullopt : std::optional<double>(get_as<double>(value, key));
    } else if (key == "targets") {
      require(value.is_array(), "config: 'targets' must be an array");
      c.targets.clear();
      for (const auto& e : value) c.targets.push_back(parse_pair(e, key));
    } else if (key == "tolerances") {
      require(value.is_object(), "config: 'tolerances' must be an object");
      for (const auto& [name, v] : value.items()) c.tolerances[name] = get_as<double>(v, name);
    } else {
      throw UsageError("config: unknown key '" + key + "'");
    }
    c.explicit_keys.insert(key);
  }
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) {
    throw UsageError("cannot read config file '" + path + "'");
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  apply_json(base, j);
  return base;
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const char* env,
                           std::optional<std::uint64_t> file) {
  if (flag) return *flag;
  if (env != nullptr && *env != '\0') return parse_seed(env, "BROWNFLOW_SEED");
  if (file) return *file;
  return 42;
}

namespace {

std::string header_line(const RunConfig& config) {
  return "# config: " + config.to_json().dump();
}

}  // namespace

void write_table(const RunConfig& config, const Table& table, std::ostream& os) {
  if (config.format == "json") {
    ordered_json body = table.extras;
    body["columns"] = table.columns;
    body["rows"] = table.rows;
    write_json(config, std::move(body), os);
    return;
  }
  os << header_line(config) << '\n';
  for (const auto& [key, value] : table.extras.items()) {
    os << "# " << key << ": " << value.dump() << '\n';
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    os << (i ? "," : "") << table.columns[i];
  }
  os << '\n' << std::setprecision(17);
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "") << row[i];
    }
    os << '\n';
  }
  if (!os) {
    throw UsageError("write failed");
  }
}

void write_json(const RunConfig& config, ordered_json body, std::ostream& os) {
  ordered_json j;
  j["config"] = config.to_json();
  for (auto& [key, value] : body.items()) j[key] = std::move(value);
  os << j.dump(2) << '\n';
  if (!os) {
    throw UsageError("write failed");
  }
}

std::vector<Complex> read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw UsageError("cannot read input file '" + path + "'");
  }
  std::string line;
  int re_col = -1;
  int im_col = -1;
  std::vector<Complex> points;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (re_col < 0) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] == "re") re_col = static_cast<int>(i);
        if (fields[i] == "im") im_col = static_cast<int>(i);
      }
      if (re_col < 0 || im_col < 0) {
        throw UsageError("input file '" + path + "' has no re,im header");
      }
      continue;
    }
    const auto need = static_cast<std::size_t>(std::max(re_col, im_col));
    if (fields.size() <= need) {
      throw UsageError("input file '" + path + "': short row at line " + std::to_string(line_no));
    }
    try {
      points.emplace_back(std::stod(fields[static_cast<std::size_t>(re_col)]),
                          std::stod(fields[static_cast<std::size_t>(im_col)]));
    } catch (const std::exception&) {
      throw UsageError("input file '" + path + "': bad number at line " + std::to_string(line_no));
    }
  }
  if (points.empty()) {
    throw UsageError("input file '" + path + "' contains no points");
  }
  return points;
}

}  // namespace brownflow::cli
