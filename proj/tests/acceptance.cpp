// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "concentrix/bounds.hpp"
#include "concentrix/experiments.hpp"
#include "concentrix/models.hpp"
#include "concentrix/report_io.hpp"
#include "concentrix/stats.hpp"

using namespace concentrix;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [FAIL]");
  }
};

std::string num(double x, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << x;
  return os.str();
}

ExperimentResult run(const std::string& id, std::size_t dim = 0) {
  ExperimentConfig c;
  c.experimentId = id;
  c.dim = dim;
  return run_experiment(c);
}

const Check* find_check(const ExperimentResult& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

const McReport* find_report(const ExperimentResult& r, const std::string& name) {
  for (const auto& nr : r.reports)
    if (nr.name == name) return &nr.report;
  return nullptr;
}

// Every failing check or verdict, by name.
std::string failures(const ExperimentResult& r) {
  std::string s;
  for (const auto& c : r.checks)
    if (!c.pass) s += " " + c.name + "=" + num(c.value);
  for (const auto& nr : r.reports)
    for (const auto& v : bound_check(nr.report))
      if (!v.pass) s += " " + nr.name + "/" + v.name + (v.t ? "@" + num(*v.t) : "");
  return s;
}

void experiment_ok(Outcome& o, const ExperimentResult& r, const std::string& label) {
  const std::string f = failures(r);
  o.require(r.all_pass(), label + (f.empty() ? " all verdicts PASS" : " failing:" + f));
}

std::string bound_summary(const McReport& rep, const std::string& name) {
  for (const auto& [n, ratio] : bound_ratios(rep))
    if (n == name) return name + " ratio " + num(ratio);
  return name + " missing";
}

Outcome criterion1() {
  Outcome o;
  bool ok = true;
  for (std::size_t d = 2; d <= 256; d *= 2) {
    ok = ok && series_variance(make_wigner(d)).v == double(d - 1);
    ok = ok && series_variance(make_toeplitz(d)).v == double(d);
  }
  o.require(ok, "wigner d-1 and toeplitz d for d=2..256");
  const std::vector<std::pair<std::size_t, std::size_t>> shapes = {{100, 100}, {50, 200}, {7, 3}, {1, 9}};
  ok = true;
  for (auto [d1, d2] : shapes) ok = ok && series_variance(make_rect_gaussian(d1, d2)).v == double(std::max(d1, d2));
  o.require(ok, "rect max(d1,d2)");
  // Integer entries: row and column sums of squares are exact.
  DenseMatrix b(5, 7);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 7; ++j) b(i, j) = double(int((i * 7 + j * 3) % 5) - 2);
  double rowMax = 0, colMax = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < 7; ++j) s += b(i, j) * b(i, j);
    rowMax = std::max(rowMax, s);
  }
  for (std::size_t j = 0; j < 7; ++j) {
    double s = 0;
    for (std::size_t i = 0; i < 5; ++i) s += b(i, j) * b(i, j);
    colMax = std::max(colMax, s);
  }
  const double vs = signed_matrix_variance(b).v, vSeries = series_variance(make_signed(b)).v;
  o.require(vs == std::max(rowMax, colMax) && vSeries == vs,
            "signed v=" + num(vs) + " rows/cols max " + num(std::max(rowMax, colMax)));
  return o;
}

Outcome criterion2() {
  Outcome o;
  const ExperimentResult r = run("master-vs-closed");
  double worst = 0;
  for (const auto& c : r.checks) worst = std::max(worst, c.value);
  experiment_ok(o, r, "master-vs-closed");
  o.require(worst <= 1e-6, "max relative discrepancy " + num(worst, 3));
  return o;
}

Outcome criterion3() {
  Outcome o;
  for (std::size_t d : {50u, 100u, 200u}) {
    const ExperimentResult r = run("wigner", d);
    const McReport* rep = find_report(r, "norm");
    const Check* c = find_check(r, "bound-over-mean");
    experiment_ok(o, r, "wigner d=" + std::to_string(d));
    if (rep && c) o.detail += " (mean " + num(rep->mean) + ", bound/mean " + num(c->value) + ")";
  }
  const ExperimentResult t = run("toeplitz", 256);
  const Check* c = find_check(t, "mean-over-sqrt-2d-ln-2d");
  o.require(c && c->pass, "toeplitz d=256 mean/sqrt(2d ln 2d)=" + num(c ? c->value : NAN) + " in [0.70,1.05]");
  const McReport* rep = find_report(t, "norm");
  o.require(rep && bound_check(*rep).front().pass, "toeplitz series-expectation dominates");
  return o;
}

Outcome criterion4() {
  Outcome o;
  const ExperimentResult r = run("rect-gaussian");
  const McReport* rep = find_report(r, "norm");
  const double bound = std::sqrt(2.0 * 100.0 * std::log(200.0));
  const double mean = rep ? rep->mean : NAN;
  o.require(mean >= 0.9 * 20.0 && mean <= bound,
            "100x100 mean " + num(mean) + " in [18, " + num(bound) + "]");
  experiment_ok(o, r, "rect-gaussian");
  return o;
}

Outcome criterion5() {
  Outcome o;
  const ExperimentResult s = run("chernoff-submatrix");
  experiment_ok(o, s, "chernoff-submatrix");
  if (const McReport* top = find_report(s, "lambdaMax")) o.detail += " (" + bound_summary(*top, "chernoff-upper") + ")";
  const ExperimentResult c = run("coupon");
  const Check* x = find_check(c, "half-crossing-over-d-ln-d");
  o.require(x && x->pass, "coupon crossing n/(d ln d)=" + num(x ? x->value : NAN) + " in [0.7,1.4]");
  experiment_ok(o, c, "coupon");
  return o;
}

Outcome criterion6() {
  Outcome o;
  const ExperimentResult r = run("er-connectivity");
  const Check* lo = find_check(r, "connected-fraction-0.5");
  const Check* hi = find_check(r, "connected-fraction-4");
  o.require(lo && lo->pass, "fraction at 0.5 ln n/n = " + num(lo ? lo->value : NAN));
  o.require(hi && hi->pass, "fraction at 4 ln n/n = " + num(hi ? hi->value : NAN));
  experiment_ok(o, r, "er-connectivity");
  return o;
}

Outcome criterion7() {
  Outcome o;
  for (const char* id : {"sparsify", "rmm", "random-features", "covariance"}) {
    const ExperimentResult r = run(id);
    experiment_ok(o, r, id);
    if (const McReport* rep = find_report(r, "deviation")) o.detail += " (" + bound_summary(*rep, "relative-recipe") + ")";
  }
  return o;
}

Outcome criterion8() {
  Outcome o;
  const ExperimentResult r = run("intrinsic-rmm");
  experiment_ok(o, r, "intrinsic-rmm");
  int below = 0;
  for (const auto& c : r.checks)
    if (c.name.find("below-ambient") != std::string::npos && c.pass) ++below;
  o.detail += " (" + std::to_string(below) + " intrinsic-below-ambient comparisons)";
  return o;
}

Outcome criterion9() {
  Outcome o;
  const ExperimentResult r = run("entropy-suite");
  experiment_ok(o, r, "entropy-suite 500 instances");
  return o;
}

Outcome criterion10() {
  Outcome o;
  const ExperimentResult r = run("khintchine");
  experiment_ok(o, r, "khintchine q=1..3");
  const Check* eq = find_check(r, "second-moment-equality");
  o.require(eq && eq->pass, "q=1 equality |est-exact|=" + num(eq ? eq->value : NAN));
  return o;
}

Outcome criterion11() {
  Outcome o;
  std::string mismatched;
  for (const auto& id : experiment_ids()) {
    ExperimentConfig c;
    c.experimentId = id;
    c.seed = 2024;
    const std::string a = render(run_experiment(c, 1), ReportFormat::json);
    const std::string b = render(run_experiment(c, 1), ReportFormat::json);
    const std::string d = render(run_experiment(c, 4), ReportFormat::json);
    if (a != b || a != d) mismatched += " " + id;
  }
  o.require(mismatched.empty(), mismatched.empty() ? "all 16 experiments byte-identical at 1 and 4 workers"
                                                   : "mismatch:" + mismatched);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    double limitSeconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, 1.0, criterion1},   {2, 5.0, criterion2},    {3, 4 * 30.0, criterion3}, {4, 30.0, criterion4},
      {5, 60.0, criterion5},  {6, 60.0, criterion6},   {7, 4 * 60.0, criterion7}, {8, 30.0, criterion8},
      {9, 10.0, criterion9},  {10, 20.0, criterion10}, {11, 600.0, criterion11},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limitSeconds) {
      o.pass = false;
      o.detail += "; runtime over " + num(c.limitSeconds) + " s";
    }
    all = all && o.pass;
    std::printf("Criterion %d: %s (%.2f s) %s\n", c.id, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("Overall: %s\n", all ? "PASS" : "FAIL");
  return all ? 0 : 1;
}
