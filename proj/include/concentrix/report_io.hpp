#pragma once

#include <string>

#include "concentrix/experiments.hpp"

namespace concentrix {

inline constexpr int kSchemaVersion = 1;

std::string report_json(const McReport& report);
std::string experiment_json(const ExperimentResult& result);
std::string experiment_csv(const ExperimentResult& result);
std::string render(const ExperimentResult& result, ReportFormat format);

/// Writes the rendered report; throws InvalidInput when the path is not writable.
void write_report(const ExperimentResult& result, const std::string& path, ReportFormat format);

}  // namespace concentrix
