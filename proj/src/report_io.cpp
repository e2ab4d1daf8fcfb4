#include "concentrix/report_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "concentrix/error.hpp"
#include "concentrix/matrix_io.hpp"

namespace concentrix {

using ojson = nlohmann::ordered_json;

namespace {

ojson optional_number(const std::optional<double>& x) { return x ? ojson(*x) : ojson(nullptr); }

ojson bound_json(const NamedBound& b) {
  ojson j;
  j["name"] = b.name;
  j["formula"] = b.bound.formulaId;
  j["kind"] = b.bound.kind == BoundKind::expectation ? "expectation" : "tailProbability";
  j["sense"] = b.sense == BoundSense::upper ? "upper" : "lower";
  j["t"] = optional_number(b.t);
  j["value"] = b.bound.value;
  j["raw"] = b.bound.raw;
  j["theta"] = optional_number(b.bound.theta);
  j["epsilon"] = optional_number(b.bound.epsilon);
  j["valid"] = b.bound.valid;
  if (!b.bound.reason.empty()) j["reason"] = b.bound.reason;
  return j;
}

ojson report_object(const McReport& r) {
  ojson j;
  j["statistic"] = r.statistic;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["mean"] = r.mean;
  j["stderr"] = r.stdError;
  j["tails"] = ojson::array();
  for (const auto& t : r.tails)
    j["tails"].push_back({{"t", t.t}, {"frequency", t.frequency}, {"wilsonLow", t.wilsonLow},
                          {"wilsonHigh", t.wilsonHigh}});
  j["bounds"] = ojson::array();
  const auto ratios = bound_ratios(r);
  std::size_t ri = 0;
  for (const auto& b : r.bounds) {
    ojson bj = bound_json(b);
    if (b.bound.kind == BoundKind::expectation) bj["ratio"] = ratios[ri++].second;
    j["bounds"].push_back(std::move(bj));
  }
  j["verdicts"] = ojson::array();
  for (const auto& v : bound_check(r))
    j["verdicts"].push_back({{"name", v.name}, {"t", optional_number(v.t)},
                             {"verdict", v.pass ? "PASS" : "FAIL"}, {"rule", v.detail}});
  return j;
}

}  // namespace

std::string report_json(const McReport& report) { return report_object(report).dump(2) + "\n"; }

std::string experiment_json(const ExperimentResult& result) {
  ojson j;
  j["schemaVersion"] = kSchemaVersion;
  j["experiment"] = result.experimentId;
  j["parameters"] = ojson::object();
  for (const auto& [k, v] : result.parameters) j["parameters"][k] = v;
  j["reports"] = ojson::array();
  for (const auto& nr : result.reports) {
    ojson r;
    r["name"] = nr.name;
    r.update(report_object(nr.report));
    j["reports"].push_back(std::move(r));
  }
  j["checks"] = ojson::array();
  for (const auto& c : result.checks) {
    ojson cj;
    cj["name"] = c.name;
    cj["value"] = c.value;
    cj["lo"] = optional_number(c.lo);
    cj["hi"] = optional_number(c.hi);
    cj["verdict"] = c.pass ? "PASS" : "FAIL";
    if (!c.detail.empty()) cj["detail"] = c.detail;
    j["checks"].push_back(std::move(cj));
  }
  j["pass"] = result.all_pass();
  return j.dump(2) + "\n";
}

namespace {

std::string num(double x) { return format_double(x); }
std::string num(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string experiment_csv(const ExperimentResult& result) {
  std::ostringstream os;
  os << "schemaVersion,experiment,report,statistic,trials,seed,mean,stderr,row,name,sense,t,"
        "frequency,wilsonLow,wilsonHigh,bound,raw,ratio,valid,verdict\n";
  const std::string prefix = std::to_string(kSchemaVersion) + "," + quoted(result.experimentId) + ",";
  for (const auto& nr : result.reports) {
    const McReport& r = nr.report;
    const std::string head = prefix + quoted(nr.name) + "," + quoted(r.statistic) + "," +
                             std::to_string(r.trials) + "," + std::to_string(r.seed) + "," +
                             num(r.mean) + "," + num(r.stdError) + ",";
    const auto verdicts = bound_check(r);
    // Thresholds without an attached bound still get a row.
    for (const auto& tail : r.tails) {
      bool any = false;
      for (std::size_t i = 0; i < r.bounds.size(); ++i) {
        const auto& b = r.bounds[i];
        if (!b.t || *b.t != tail.t) continue;
        any = true;
        os << head << "tail," << quoted(b.name) << ",upper," << num(tail.t) << ","
           << num(tail.frequency) << "," << num(tail.wilsonLow) << "," << num(tail.wilsonHigh) << ","
           << num(b.bound.value) << "," << num(b.bound.raw) << ",," << (b.bound.valid ? "true" : "false")
           << "," << (verdicts[i].pass ? "PASS" : "FAIL") << "\n";
      }
      if (!any)
        os << head << "tail,,," << num(tail.t) << "," << num(tail.frequency) << ","
           << num(tail.wilsonLow) << "," << num(tail.wilsonHigh) << ",,,,,\n";
    }
    for (std::size_t i = 0; i < r.bounds.size(); ++i) {
      const auto& b = r.bounds[i];
      if (b.bound.kind != BoundKind::expectation) continue;
      const double ratio = r.mean != 0.0 ? b.bound.value / r.mean : 0.0;
      os << head << "expectation," << quoted(b.name) << ","
         << (b.sense == BoundSense::upper ? "upper" : "lower") << ",,,,," << num(b.bound.value) << ","
         << num(b.bound.raw) << "," << num(ratio) << "," << (b.bound.valid ? "true" : "false") << ","
         << (verdicts[i].pass ? "PASS" : "FAIL") << "\n";
    }
  }
  for (const auto& c : result.checks)
    // Check rows carry lo/hi in the Wilson columns and the value in the bound column.
    os << prefix << ",,,,,,check," << quoted(c.name) << ",,,," << num(c.lo) << "," << num(c.hi)
       << "," << num(c.value) << ",,,," << (c.pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::string render(const ExperimentResult& result, ReportFormat format) {
  return format == ReportFormat::json ? experiment_json(result) : experiment_csv(result);
}

void write_report(const ExperimentResult& result, const std::string& path, ReportFormat format) {
  const std::string text = render(result, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::InvalidInput, "cannot open report path " + path);
  out << text;
  out.flush();
  if (!out) fail(ErrorCode::InvalidInput, "failed writing report to " + path);
}

}  // namespace concentrix
