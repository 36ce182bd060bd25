#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

using namespace brownflow;
using namespace brownflow::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args, const char* env_seed = nullptr) {
  args.insert(args.begin(), "brownflow");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err, env_seed);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "brownflow_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

json config_header(const std::string& csv) {
  const std::string prefix = "# config: ";
  EXPECT_EQ(csv.rfind(prefix, 0), 0u);
  return json::parse(csv.substr(prefix.size(), csv.find('\n') - prefix.size()));
}

// Non-comment lines of a CSV, header first.
std::vector<std::string> data_lines(const std::string& csv) {
  std::vector<std::string> lines;
  std::stringstream ss(csv);
  for (std::string line; std::getline(ss, line);) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

std::vector<double> fields(const std::string& line) {
  std::vector<double> v;
  std::stringstream ss(line);
  for (std::string f; std::getline(ss, f, ',');) v.push_back(std::stod(f));
  return v;
}

}  // namespace

// ---- config ------------------------------------------------------------------

TEST(Config, SeedPrecedence) {
  EXPECT_EQ(resolve_seed(std::nullopt, nullptr, std::nullopt), 42u);
  EXPECT_EQ(resolve_seed(std::nullopt, nullptr, 5u), 5u);
  EXPECT_EQ(resolve_seed(std::nullopt, "9", 5u), 9u);
  EXPECT_EQ(resolve_seed(3u, "9", 5u), 3u);
  EXPECT_EQ(resolve_seed(std::nullopt, "", 5u), 5u);
  EXPECT_THROW(resolve_seed(std::nullopt, "seven", 5u), UsageError);
}

TEST(Config, SeedPrecedenceThroughCli) {
  const fs::path cfg = scratch("seed.json");
  write_file(cfg, R"({"version": 1, "seed": 5})");
  const auto seed_of = [](const CliRun& r) { return config_header(r.out)["seed"].get<std::uint64_t>(); };
  const std::vector<std::string> base = {"sample", "--ensemble", "gue", "-n", "3"};
  auto with = [&](std::vector<std::string> extra) {
    auto a = base;
    a.insert(a.end(), extra.begin(), extra.end());
    return a;
  };
  EXPECT_EQ(seed_of(run(base)), 42u);
  EXPECT_EQ(seed_of(run(with({"--config", cfg.string()}))), 5u);
  EXPECT_EQ(seed_of(run(with({"--config", cfg.string()}), "9")), 9u);
  EXPECT_EQ(seed_of(run(with({"--config", cfg.string(), "--seed", "3"}), "9")), 3u);
}

TEST(Config, RejectsUnknownKeysAndVersions) {
  RunConfig c;
  EXPECT_THROW(apply_json(c, json::parse(R"({"version": 1, "nn": 3})")), UsageError);
  EXPECT_THROW(apply_json(c, json::parse(R"({"version": 2})")), UsageError);
  EXPECT_THROW(apply_json(c, json::parse(R"({"n": 3})")), UsageError);
  EXPECT_THROW(apply_json(c, json::parse(R"({"version": 1, "n": "three"})")), UsageError);
  EXPECT_THROW(apply_json(c, json::parse(R"({"version": 1, "n": 2.5})")), UsageError);
  EXPECT_NO_THROW(apply_json(c, json::parse(R"({"version": 1, "n": 3, "t": 0.5})")));
  EXPECT_EQ(c.n, 3);
  EXPECT_EQ(c.t, 0.5);

  const fs::path cfg = scratch("bad.json");
  write_file(cfg, R"({"version": 1, "colour": "red"})");
  const CliRun r = run({"sample", "--ensemble", "gue", "--config", cfg.string()});
  EXPECT_EQ(r.code, kUsage);
  EXPECT_NE(r.err.find("colour"), std::string::npos);
}

TEST(Config, RoundTripsThroughJson) {
  RunConfig c;
  c.command = "hj";
  c.n = 17;
  c.t = 2.5;
  c.x0 = 0.25;
  c.targets = {Complex(1.0, 0.5)};
  c.tolerances["semicircle.l1_distance"] = 0.1;
  RunConfig d;
  apply_json(d, json::parse(c.to_json().dump()));
  EXPECT_EQ(d.to_json(), c.to_json());
}

TEST(Config, ValidationFailuresAreUsageErrors) {
  EXPECT_EQ(run({"sample", "--ensemble", "gue", "-n", "0"}).code, kUsage);
  EXPECT_EQ(run({"density", "-t", "-1"}).code, kUsage);
  EXPECT_EQ(run({"sample", "--ensemble", "gue", "--format", "xml"}).code, kUsage);
  EXPECT_EQ(run({"sample", "--ensemble", "wishart"}).code, kUsage);
  EXPECT_EQ(run({"sample"}).code, kUsage);
  EXPECT_EQ(run({"sample", "--no-such-flag"}).code, kUsage);
  EXPECT_EQ(run({}).code, kUsage);
  EXPECT_EQ(run({"preset", "fig-unknown"}).code, kUsage);
  EXPECT_EQ(run({"--help"}).code, kOk);
}

TEST(Config, UnwritableOutputNamesThePath) {
  const CliRun r = run({"density", "-o", "/nonexistent-dir/x.csv"});
  EXPECT_EQ(r.code, kUsage);
  EXPECT_NE(r.err.find("/nonexistent-dir/x.csv"), std::string::npos);
}

// ---- sample ------------------------------------------------------------------

TEST(Sample, GueIsByteIdenticalGivenSeed) {
  // The output path is part of the embedded config, so both runs use the same one.
  const fs::path a = scratch("gue.csv");
  ASSERT_EQ(run({"sample", "--ensemble", "gue", "-n", "2000", "--seed", "7", "-o", a.string()}).code, kOk);
  const std::string sa = slurp(a);
  ASSERT_EQ(run({"sample", "--ensemble", "gue", "-n", "2000", "--seed", "7", "-o", a.string()}).code, kOk);
  EXPECT_EQ(sa, slurp(a));
  ASSERT_EQ(run({"sample", "--ensemble", "gue", "-n", "2000", "--seed", "8", "-o", a.string()}).code, kOk);
  EXPECT_NE(data_lines(sa), data_lines(slurp(a)));
  const auto lines = data_lines(sa);
  ASSERT_EQ(lines.size(), 2001u);
  EXPECT_EQ(lines[0], "re,im");
  EXPECT_EQ(config_header(sa)["n"], 2000);
}

TEST(Sample, GinibreCloudInUnitDisk) {
  const CliRun r = run({"sample", "--ensemble", "ginibre", "-n", "2000", "--seed", "3"});
  ASSERT_EQ(r.code, kOk);
  const auto lines = data_lines(r.out);
  ASSERT_EQ(lines.size(), 2001u);
  int inside = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto v = fields(lines[i]);
    inside += std::hypot(v[0], v[1]) <= 1.02;
  }
  EXPECT_GE(inside / 2000.0, 0.97);
}

TEST(Sample, GlBmShortTimeCloudNearOne) {
  const CliRun r = run({"sample", "--ensemble", "gl-bm", "-t", "0.1", "-n", "2000", "--seed", "4"});
  ASSERT_EQ(r.code, kOk);
  const auto lines = data_lines(r.out);
  ASSERT_EQ(lines.size(), 2001u);
  int near = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto v = fields(lines[i]);
    near += std::hypot(v[0] - 1.0, v[1]) <= 0.45;
  }
  EXPECT_GE(near / 2000.0, 0.90);
}

TEST(Sample, JsonFormatEmbedsConfig) {
  const CliRun r = run({"sample", "--ensemble", "nilpotent-demo", "-n", "20", "--format", "json"});
  ASSERT_EQ(r.code, kOk);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["config"]["ensemble"], "nilpotent-demo");
  EXPECT_EQ(j["config"]["version"], 1);
  EXPECT_EQ(j["columns"], json({"re", "im"}));
  EXPECT_EQ(j["rows"].size(), 20u);
}

TEST(Sample, PoolsSamples) {
  const CliRun r = run({"sample", "--ensemble", "unitary-bm", "-n", "10", "--samples", "3", "-k", "5"});
  ASSERT_EQ(r.code, kOk);
  const auto lines = data_lines(r.out);
  ASSERT_EQ(lines.size(), 31u);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto v = fields(lines[i]);
    EXPECT_NEAR(std::hypot(v[0], v[1]), 1.0, 1e-10);
  }
}

// ---- density ---------------------------------------------------------------

TEST(Density, CircularConstantInsideDisk) {
  const CliRun r = run({"density", "--density", "circular", "-t", "1", "--bins", "21", "--format", "json"});
  ASSERT_EQ(r.code, kOk);
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["total_mass"].get<double>(), 1.0, 1e-10);
  int inside = 0;
  for (const auto& row : j["rows"]) {
    const double re = row[0], im = row[1], d = row[3];
    if (std::hypot(re, im) < 0.999) {
      ++inside;
      EXPECT_DOUBLE_EQ(d, 1.0 / std::numbers::pi);
    } else if (std::hypot(re, im) > 1.001) {
      EXPECT_EQ(d, 0.0);
    }
  }
  EXPECT_GT(inside, 100);
}

TEST(Density, MultiplicativeMassAndEvenProfile) {
  const CliRun r = run({"density", "--density", "multiplicative", "-t", "1", "--theta-resolution", "64",
                     "--format", "json"});
  ASSERT_EQ(r.code, kOk);
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["total_mass"].get<double>(), 1.0, 1e-3);
  EXPECT_EQ(j["columns"], json({"theta", "r_inner", "r_outer", "w_t"}));
  const auto& rows = j["rows"];
  ASSERT_GT(rows.size(), 10u);
  // Profile rows come in theta order; the table is symmetric about theta = 0.
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& a = rows[i];
    const auto& b = rows[rows.size() - 1 - i];
    EXPECT_NEAR(a[0].get<double>(), -b[0].get<double>(), 1e-12);
    if (a[3].is_number() && b[3].is_number()) {
      EXPECT_NEAR(a[3].get<double>(), b[3].get<double>(), 1e-12);
    }
  }
}

TEST(Density, SemicircleCsvHeader) {
  const CliRun r = run({"density", "--bins", "5"});
  ASSERT_EQ(r.code, kOk);
  const auto lines = data_lines(r.out);
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines[0], "x,density");
  EXPECT_NE(r.out.find("# total_mass: "), std::string::npos);
  EXPECT_NEAR(fields(lines[3])[1], 1.0 / std::numbers::pi, 1e-15);
}

// ---- compare -----------------------------------------------------------------

TEST(Compare, MissingInputsAreUsageErrors) {
  EXPECT_EQ(run({"compare"}).code, kUsage);
  EXPECT_EQ(run({"compare", "--input", scratch("absent.csv").string(), "--check", "circular"}).code,
            kUsage);
  const fs::path empty = scratch("empty.csv");
  write_file(empty, "re,im\n");
  EXPECT_EQ(run({"compare", "--input", empty.string(), "--check", "circular"}).code, kUsage);
}

TEST(Compare, SemicirclePassesAndToleranceCanFail) {
  const CliRun pass = run({"compare", "--ensemble", "gue", "-n", "500", "--samples", "4"});
  ASSERT_EQ(pass.code, kOk) << pass.out << pass.err;
  const json j = json::parse(pass.out);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_LT(j["checks"][0]["metrics"][0]["value"].get<double>(), 0.08);

  const CliRun fail = run({"compare", "--ensemble", "gue", "-n", "500", "--samples", "4",
                        "--tolerance", "semicircle.l1_distance=1e-6"});
  EXPECT_EQ(fail.code, kComparisonFailed);
  EXPECT_FALSE(json::parse(fail.out)["passed"].get<bool>());

  EXPECT_EQ(run({"compare", "--ensemble", "gue", "-n", "20", "--tolerance", "bogus.metric=1"}).code,
            kUsage);
}

TEST(Compare, ReadsPointsFromCsv) {
  const fs::path cloud = scratch("ginibre.csv");
  ASSERT_EQ(run({"sample", "--ensemble", "ginibre", "-n", "600", "-o", cloud.string()}).code, kOk);
  const CliRun r = run({"compare", "--input", cloud.string(), "--check", "circular"});
  EXPECT_EQ(r.code, kOk) << r.out;
  EXPECT_EQ(json::parse(r.out)["points"], 600);
  EXPECT_EQ(run({"compare", "--input", cloud.string()}).code, kUsage);  // "all" needs an ensemble
}

// ---- hj ----------------------------------------------------------------------

TEST(Hj, CircularTrajectoryMatchesClosedForm) {
  const CliRun r = run({"hj", "--mode", "circular", "--lambda-re", "0.5", "--x0", "1", "-t", "0.9"});
  ASSERT_EQ(r.code, kOk);
  const auto lines = data_lines(r.out);
  EXPECT_EQ(lines[0], "t,x,p,h,x_exact,p_exact");
  ASSERT_GT(lines.size(), 3u);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto v = fields(lines[i]);
    EXPECT_NEAR(v[1], v[4], 1e-8 * std::max(1.0, std::abs(v[4])));
    EXPECT_NEAR(v[2], v[5], 1e-8 * std::max(1.0, std::abs(v[5])));
  }
}

TEST(Hj, MultiplicativePsiDriftIsSmall) {
  const CliRun r = run({"hj", "--mode", "multiplicative", "--lambda-re", "0.6", "--lambda-im", "0.3",
                     "--x0", "0.5", "-t", "0.5", "--format", "json"});
  ASSERT_EQ(r.code, kOk);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["columns"].back(), "psi");
  EXPECT_LT(j["max_psi_drift"].get<double>(), 1e-8);
  EXPECT_LT(j["max_h_drift"].get<double>(), 1e-8);
}

TEST(Hj, LifetimeScanTracksUnitCircleCurve) {
  const CliRun r = run({"hj", "--mode", "lifetime-scan", "--bins", "12", "--format", "json"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_LT(json::parse(r.out)["max_abs_error"].get<double>(), 0.01);
}

TEST(Hj, ShootingReportsFailuresPerTarget) {
  const CliRun r = run({"hj", "--mode", "shoot", "--target", "1,0", "--target", "3,0", "--format", "json"});
  EXPECT_EQ(r.code, kNumeric);
  const json j = json::parse(r.out);
  ASSERT_EQ(j["rows"].size(), 2u);
  EXPECT_EQ(j["rows"][0][2], 1.0);
  EXPECT_NEAR(j["rows"][0][4].get<double>(), 1.0, 1e-3);
  EXPECT_EQ(j["rows"][1][2], 0.0);
  EXPECT_NE(r.err.find("failed"), std::string::npos);
}

// ---- presets ----------------------------------------------------------------

TEST(Preset, WtPlotsWritesFourProfiles) {
  const fs::path dir = scratch("wtplots");
  fs::remove_all(dir);
  const CliRun r = run({"preset", "fig-wtplots", "-o", dir.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  for (const char* tag : {"2", "3.5", "4", "7"}) {
    const std::string csv = slurp(dir / ("fig-wtplots-t" + std::string(tag) + ".csv"));
    EXPECT_EQ(config_header(csv)["preset"], "fig-wtplots");
    EXPECT_EQ(data_lines(csv)[0], "theta,r_inner,r_outer,w_t");
  }
  EXPECT_EQ(preset_names().size(), 12u);
}

TEST(Preset, SampleSizeDefaultsToFigureSize) {
  const fs::path dir = scratch("perturb");
  fs::remove_all(dir);
  ASSERT_EQ(run({"preset", "fig-perturb1", "-o", dir.string(), "-n", "50"}).code, kOk);
  const std::string csv = slurp(dir / "fig-perturb1.csv");
  EXPECT_EQ(config_header(csv)["n"], 50);
  EXPECT_EQ(config_header(csv)["epsilon"], 1e-5);
  EXPECT_EQ(data_lines(csv).size(), 51u);
}
