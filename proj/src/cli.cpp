#include "concentrix/cli.hpp"

#include <CLI11.hpp>
#include <iomanip>
#include <sstream>

#include "concentrix/error.hpp"
#include "concentrix/report_io.hpp"

namespace concentrix {

namespace {

std::string join_ids() {
  std::string s;
  for (const auto& id : experiment_ids()) s += (s.empty() ? "" : ", ") + id;
  return s;
}

void build_app(CLI::App& app, CliOptions& o, std::string& format) {
  auto& c = o.config;
  app.add_option("--exp", c.experimentId, "experiment id (see --list)")
      ->check([](const std::string& id) { return is_experiment(id) ? std::string{} : "unknown experiment '" + id + "'"; });
  app.add_option("--dim", c.dim, "dimension (0 = experiment default)")->check(CLI::Range(std::size_t{0}, kMaxDim));
  app.add_option("--rows", c.rows, "row count (0 = default)")->check(CLI::Range(std::size_t{0}, kMaxDim));
  app.add_option("--cols", c.cols, "column count (0 = default)")->check(CLI::Range(std::size_t{0}, kMaxDim));
  app.add_option("--trials", c.trials, "Monte Carlo trials (0 = default: 200 norms, 1e4 tails/moments)")
      ->check(CLI::Range(std::size_t{0}, kMaxTrials));
  app.add_option("--seed", c.seed, "root seed")->capture_default_str();
  app.add_option("--eps", c.eps, "epsilon grid, comma separated (default 0.5)")->delimiter(',');
  app.add_option("--t", c.t, "threshold grid, comma separated")->delimiter(',');
  app.add_option("--out", c.out, "report path, '-' for stdout");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_flag("--list", o.list, "print experiment ids and exit");
}

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

void print_summary(const ExperimentResult& r, std::ostream& os) {
  for (const auto& nr : r.reports) {
    const auto verdicts = bound_check(nr.report);
    for (std::size_t i = 0; i < nr.report.bounds.size(); ++i) {
      const auto& b = nr.report.bounds[i];
      os << r.experimentId << ' ' << nr.name << ' ' << b.name;
      if (b.t) {
        const TailEstimate* tail = nr.report.tail_at(*b.t);
        os << " t=" << num(*b.t) << " freq=" << num(tail ? tail->frequency : 0.0)
           << " bound=" << num(b.bound.value);
      } else {
        os << " mean=" << num(nr.report.mean) << " bound=" << num(b.bound.value)
           << " ratio=" << num(nr.report.mean != 0.0 ? b.bound.value / nr.report.mean : 0.0);
      }
      os << ' ' << (verdicts[i].pass ? "PASS" : "FAIL") << '\n';
    }
  }
  for (const auto& c : r.checks) {
    os << r.experimentId << " check " << c.name << " value=" << num(c.value);
    if (c.lo) os << " lo=" << num(*c.lo);
    if (c.hi) os << " hi=" << num(*c.hi);
    os << ' ' << (c.pass ? "PASS" : "FAIL") << '\n';
  }
  os << r.experimentId << " overall " << (r.all_pass() ? "PASS" : "FAIL") << '\n';
}

}  // namespace

CliOptions parse_args(int argc, const char* const* argv) {
  CliOptions o;
  std::string format = "json";
  CLI::App app{"concentrix: Monte Carlo checks of matrix concentration bounds"};
  build_app(app, o, format);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    o.help = app.help();
    return o;
  } catch (const CLI::ParseError& e) {
    fail(ErrorCode::UsageError, e.what());
  }
  o.config.format = format == "csv" ? ReportFormat::csv : ReportFormat::json;
  if (!o.list && o.config.experimentId.empty())
    fail(ErrorCode::UsageError, "--exp is required (one of: " + join_ids() + ")");
  return o;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliOptions o;
  try {
    o = parse_args(argc, argv);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return 2;
  }
  if (!o.help.empty()) {
    out << o.help;
    return 0;
  }
  if (o.list) {
    for (const auto& id : experiment_ids()) out << id << '\n';
    return 0;
  }
  try {
    const ExperimentResult r = run_experiment(o.config);
    const bool toStdout = o.config.out == "-";
    print_summary(r, toStdout ? err : out);
    if (toStdout)
      out << render(r, o.config.format);
    else if (!o.config.out.empty())
      write_report(r, o.config.out, o.config.format);
    return r.all_pass() ? 0 : 1;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return e.code() == ErrorCode::UsageError ? 2 : 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace concentrix
