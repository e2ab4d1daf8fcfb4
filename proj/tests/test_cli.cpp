#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "concentrix/cli.hpp"
#include "concentrix/error.hpp"
#include "concentrix/experiments.hpp"
#include "concentrix/model_io.hpp"
#include "concentrix/report_io.hpp"
#include "json.hpp"
#include "test_util.hpp"

using namespace concentrix;
using concentrix::testing::random_dense;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "concentrix");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("concentrix_test_" + name);
}

}  // namespace

TEST(Cli, ListPrintsIds) {
  const CliRun r = cli({"--list"});
  EXPECT_EQ(r.code, 0);
  std::istringstream is(r.out);
  std::vector<std::string> lines;
  for (std::string l; std::getline(is, l);) lines.push_back(l);
  EXPECT_EQ(lines, experiment_ids());
  EXPECT_EQ(lines.size(), 16u);
}

TEST(Cli, ParseConfig) {
  const char* argv[] = {"concentrix", "--exp", "wigner", "--dim", "100", "--trials", "200", "--seed", "7",
                        "--eps", "0.25,0.5", "--format", "csv"};
  const CliOptions o = parse_args(13, argv);
  EXPECT_EQ(o.config.experimentId, "wigner");
  EXPECT_EQ(o.config.dim, 100u);
  EXPECT_EQ(o.config.trials, 200u);
  EXPECT_EQ(o.config.seed, 7u);
  EXPECT_EQ(o.config.eps, (std::vector<double>{0.25, 0.5}));
  EXPECT_EQ(o.config.format, ReportFormat::csv);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({"--exp", "bogus"}).code, 2);
  EXPECT_EQ(cli({"--exp", "wigner", "--dim", "5000"}).code, 2);
  EXPECT_EQ(cli({"--frobnicate"}).code, 2);
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"--exp", "wigner", "--format", "xml"}).code, 2);
  const char* argv[] = {"concentrix", "--exp", "bogus"};
  try {
    parse_args(3, argv);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UsageError);
  }
}

TEST(Cli, HelpDocumentsFlags) {
  const CliRun r = cli({"--help"});
  EXPECT_EQ(r.code, 0);
  for (const char* flag : {"--exp", "--dim", "--rows", "--cols", "--trials", "--seed", "--eps", "--t", "--out",
                           "--format", "--list"})
    EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
}

TEST(Cli, UnwritableOutputIsRuntimeError) {
  const CliRun r = cli({"--exp", "master-vs-closed", "--out", "/nonexistent-dir/x/report.json"});
  EXPECT_EQ(r.code, 3);
}

TEST(Cli, BadParameterIsRuntimeError) {
  EXPECT_EQ(cli({"--exp", "sparsify", "--eps", "1.5"}).code, 3);
}

TEST(Cli, WignerDefaultRun) {
  const auto path = temp_path("wigner.json");
  const CliRun r = cli({"--exp", "wigner", "--out", path.string()});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("ratio="), std::string::npos);
  EXPECT_NE(r.out.find("wigner overall PASS"), std::string::npos);
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["schemaVersion"], 1);
  EXPECT_EQ(j["experiment"], "wigner");
  EXPECT_TRUE(j["pass"].get<bool>());
  const auto& rep = j["reports"][0];
  for (const char* key : {"statistic", "trials", "seed", "mean", "stderr", "tails", "bounds", "verdicts"})
    EXPECT_TRUE(rep.contains(key)) << key;
  EXPECT_EQ(rep["trials"], 200);
  std::filesystem::remove(path);
}

TEST(Cli, StdoutReportAndSummaryOnStderr) {
  const CliRun r = cli({"--exp", "master-vs-closed", "--out", "-", "--format", "csv"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("schemaVersion,experiment,report", 0), 0u);
  EXPECT_NE(r.err.find("master-vs-closed overall PASS"), std::string::npos);
}

TEST(Cli, ErBelowThresholdPasses) {
  const CliRun r = cli({"--exp", "er-connectivity", "--out", "-"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  bool seen = false;
  for (const auto& c : j["checks"])
    if (c["name"] == "connected-fraction-0.5") {
      seen = true;
      EXPECT_LE(c["value"].get<double>(), 0.05);
      EXPECT_EQ(c["verdict"], "PASS");
    }
  EXPECT_TRUE(seen);
}

TEST(Reports, RenderIsStableAndCsvRowsAreRectangular) {
  ExperimentConfig c;
  c.experimentId = "rmm";
  c.trials = 20;
  const ExperimentResult a = run_experiment(c, 1), b = run_experiment(c, 2);
  EXPECT_EQ(render(a, ReportFormat::json), render(b, ReportFormat::json));
  const std::string csv = render(a, ReportFormat::csv);
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  const auto cols = std::count(line.begin(), line.end(), ',');
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), cols) << line;
  }
  EXPECT_GT(rows, 0);
  const auto j = nlohmann::json::parse(render(a, ReportFormat::json));
  EXPECT_EQ(j["parameters"]["seed"], 1);
  EXPECT_EQ(j["reports"][0]["bounds"].size(), j["reports"][0]["verdicts"].size());
}

TEST(Experiments, UnknownAndRangeErrors) {
  ExperimentConfig c;
  c.experimentId = "nope";
  try {
    run_experiment(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UsageError);
  }
  c.experimentId = "sparsify";
  c.eps = {0.0};
  EXPECT_THROW(run_experiment(c), Error);
  EXPECT_TRUE(is_experiment("khintchine"));
  EXPECT_FALSE(is_experiment("Khintchine"));
}

TEST(ModelIo, RoundTrip) {
  RandomStream fx(30);
  const DenseMatrix b = random_dense(3, 4, fx);
  for (const SamplerModel& m : {sparsify_model(b), rmm_model(b, b.transpose()), column_submatrix_model(b, 2.0),
                                er_laplacian_model(5, 0.3), gaussian_series_model(make_toeplitz(3))}) {
    const std::string text = model_to_json(m, 42);
    const ModelDescriptor d = model_from_json(text);
    EXPECT_EQ(d.seed, 42u);
    EXPECT_EQ(d.model.kind, m.kind);
    EXPECT_EQ(d.model.target, m.target);
    EXPECT_EQ(model_to_json(d.model, 42), text);
  }
  KernelSpec spec;
  spec.kind = KernelKind::angular;
  spec.points = {{1.0, 0.0}, {0.5, 0.5}};
  const ModelDescriptor k = model_from_json(model_to_json(kernel_features_model(spec), 1));
  EXPECT_EQ(k.model.kernel.points, spec.points);
  EXPECT_EQ(k.model.kernel.kind, KernelKind::angular);
}

TEST(ModelIo, Malformed) {
  for (const char* bad : {"", "{", "[]", R"({"kind":"sparsify"})", R"({"kind":"zzz","params":{},"seed":1})"}) {
    try {
      model_from_json(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_TRUE(e.code() == ErrorCode::InvalidInput || e.code() == ErrorCode::UnsupportedModel) << bad;
    }
  }
}
