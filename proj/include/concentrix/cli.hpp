#pragma once

#include <ostream>
#include <string>

#include "concentrix/experiments.hpp"

namespace concentrix {

struct CliOptions {
  ExperimentConfig config;
  bool list = false;
  std::string help;  // set when --help was requested
};

/// Throws Error(UsageError) on bad flags or values.
CliOptions parse_args(int argc, const char* const* argv);

/// Exit codes: 0 all verdicts pass, 1 some verdict failed, 2 usage error, 3 runtime error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace concentrix
