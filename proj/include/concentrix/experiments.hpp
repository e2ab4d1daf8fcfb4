#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "concentrix/mc.hpp"

namespace concentrix {

enum class ReportFormat { json, csv };

struct ExperimentConfig {
  std::string experimentId;
  std::size_t dim = 0;  // 0 selects the experiment default
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 1;
  std::vector<double> eps;
  std::vector<double> t;
  std::string out;
  ReportFormat format = ReportFormat::json;
};

inline constexpr std::size_t kMaxDim = 2048;
inline constexpr std::size_t kMaxTrials = 1000000;

/// Named pass/fail assertion that is not a bound verdict (bands, crossings, residuals).
struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  std::optional<double> lo;
  std::optional<double> hi;
  std::string detail;
};

struct NamedReport {
  std::string name;
  McReport report;
};

struct ExperimentResult {
  std::string experimentId;
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<NamedReport> reports;
  std::vector<Check> checks;

  bool all_pass() const;
};

const std::vector<std::string>& experiment_ids();
bool is_experiment(const std::string& id);

ExperimentResult run_experiment(const ExperimentConfig& config, unsigned workers = default_workers());

}  // namespace concentrix
