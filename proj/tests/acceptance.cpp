// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "percolab/cli.hpp"
#include "percolab/config.hpp"
#include "percolab/connectivity.hpp"
#include "percolab/montecarlo.hpp"
#include "percolab/oracle.hpp"
#include "percolab/pivotal.hpp"
#include "percolab/threshold.hpp"

using namespace percolab;
using oracle::Rational;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Verdict {
  bool pass = false;
  std::string detail;
};

RunOptions options(std::uint64_t samples, double confidence = kDefaultConfidence) {
  RunOptions o;
  o.samples = samples;
  o.rng.seed = kSeed;
  o.workers = 1;
  o.confidence = confidence;
  return o;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5g", v);
  return buf;
}

std::string list(const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ", " : "") + fmt(values[i]);
  return out + "]";
}

Verdict oracle_exactness() {
  const auto unit = oracle::exact_probability(HorizontalCrossing{Rect(1, 1)}, Rect(1, 1));
  const auto two = oracle::exact_probability(HorizontalCrossing{Rect(2, 1)}, Rect(2, 1));
  const Rational half(1, 2);
  const bool counts = unit.counts == std::vector<std::uint64_t>{0, 2, 5, 4, 1};
  const bool unit_value = unit.evaluate(half) == Rational(3, 4);
  const bool two_value = two.evaluate(half) == half;
  return {counts && unit_value && two_value,
          "1x1 counts " + std::string(counts ? "(0,2,5,4,1)" : "wrong") + ", Pr(1x1) = " +
              unit.evaluate(half).str() + ", Pr(2x1) = " + two.evaluate(half).str()};
}

Verdict duality_dichotomy() {
  std::uint64_t checked = 0, violations = 0;
  DisjointSets scratch;
  for (const Rect r : {Rect(1, 1), Rect(2, 1), Rect(3, 1), Rect(2, 2), Rect(3, 2)}) {
    for (std::uint64_t m = 0; m < (1ULL << r.edge_count()); ++m) {
      const auto omega = Configuration::from_mask(r, m);
      violations += has_horizontal_crossing(r, omega, scratch) ==
                    has_vertical_dual_crossing(r, omega, scratch);
      ++checked;
    }
  }
  const Rect big(64, 64);
  Configuration omega(big);
  for (double p : {0.2, 0.5, 0.8}) {
    for (std::uint64_t s = 0; s < 100000; ++s) {
      sample_into(omega, p, SampleStream(kSeed, s));
      violations += has_horizontal_crossing(big, omega, scratch) ==
                    has_vertical_dual_crossing(big, omega, scratch);
      ++checked;
    }
  }
  return {violations == 0, std::to_string(checked) + " configurations, " +
                               std::to_string(violations) + " violations"};
}

Verdict russo_identity() {
  bool pass = true;
  std::string detail;
  for (const Rect r : {Rect(1, 1), Rect(2, 1), Rect(3, 1), Rect(3, 2)}) {
    const auto report = oracle::russo_derivative_check(r);
    pass = pass && report.passed && report.max_residual == 0;
    detail += format_rect(r) + " residual " + report.max_residual.str() + "; ";
  }
  return {pass, detail};
}

Verdict pivotal_structure() {
  std::uint64_t checked = 0, violations = 0;
  std::string first_failure;
  auto check = [&](const Rect& r, const Configuration& omega, const PivotalFinder& finder) {
    for (std::size_t e : finder.find(omega)) {
      const auto s = check_pivotal_structure(r, omega, e);
      ++checked;
      if (!s.ok()) {
        ++violations;
        if (first_failure.empty()) first_failure = "; first: " + s.describe();
      }
    }
  };
  for (const Rect r : {Rect(3, 1), Rect(3, 2)}) {
    const PivotalFinder finder(r);
    for (std::uint64_t m = 0; m < (1ULL << r.edge_count()); ++m)
      check(r, Configuration::from_mask(r, m), finder);
  }
  const Rect r(12, 4);
  const PivotalFinder finder(r);
  Configuration omega(r);
  for (double p : {0.3, 0.5, 0.7}) {
    for (std::uint64_t s = 0; s < 10000; ++s) {
      sample_into(omega, p, SampleStream(kSeed, s));
      check(r, omega, finder);
    }
  }
  return {violations == 0, std::to_string(checked) + " pivotal edges checked, " +
                               std::to_string(violations) + " violations" + first_failure};
}

Verdict pivotal_inequalities() {
  const auto grid = oracle::rational_grid(1, 9, 10);
  std::size_t rows = 0, failed = 0;
  for (const Rect r : {Rect(2, 1), Rect(3, 1)}) {
    for (std::size_t e = 0; e < r.edge_count(); ++e) {
      for (const auto& row : oracle::pivotal_inequality_check(r, e, grid).rows) {
        ++rows;
        failed += !(row.primal_ok && row.dual_ok);
      }
    }
  }
  return {failed == 0, std::to_string(rows) + " (edge, p) rows, " + std::to_string(failed) +
                           " failing"};
}

Verdict monte_carlo_vs_oracle() {
  constexpr std::uint64_t n = 100000;
  const double z = z_for_confidence(0.999);
  struct Case {
    Rect rect;
    double p;
  };
  const Case cases[] = {{Rect(1, 1), 0.5}, {Rect(2, 1), 0.5}, {Rect(3, 1), 0.25},
                        {Rect(3, 1), 0.5}, {Rect(3, 1), 0.75}};
  bool pass = true;
  std::string detail;
  for (const auto& c : cases) {
    const double exact = oracle::exact_probability(HorizontalCrossing{c.rect}, c.rect).evaluate(c.p);
    const double band = z * std::sqrt(exact * (1 - exact) / static_cast<double>(n));
    const auto est = estimate_event(HorizontalCrossing{c.rect}, c.p, options(n));
    const bool ok = std::abs(est.p_hat - exact) <= band;
    pass = pass && ok;
    detail += format_rect(c.rect) + "@" + fmt(c.p) + ": " + fmt(est.p_hat) + " vs " + fmt(exact) +
              " +- " + fmt(band) + (ok ? "" : " OUT") + "; ";
  }
  return {pass, detail};
}

Verdict self_duality() {
  bool pass = true;
  std::vector<double> values;
  for (int l : {8, 16, 32}) {
    const auto est = estimate_event(HorizontalCrossing{Rect(l + 1, l)}, 0.5, options(100000));
    pass = pass && std::abs(est.p_hat - 0.5) <= 0.01;
    values.push_back(est.p_hat);
  }
  return {pass, "Pr(H) for l = 8, 16, 32: " + list(values) + ", tolerance 0.5 +- 0.01"};
}

Verdict rsw_floor() {
  const int sizes[] = {8, 16, 32, 64};
  const auto report = rsw_floor_check(sizes, 0.5, options(20000), 0.01, 3, 0.05);
  std::vector<double> values, lows;
  for (const auto& row : report.rows) {
    values.push_back(row.estimate.p_hat);
    lows.push_back(row.estimate.ci_low);
  }
  return {report.floor_ok && report.stable_ok,
          "estimates " + list(values) + ", ci_low " + list(lows) + ", floor 0.01, max step 0.05"};
}

Verdict lemma2() {
  const int sizes[] = {8, 16, 32, 64};
  const auto report = lemma2_check(0.6, sizes, 0.99, options(20000));
  std::vector<double> values;
  for (const auto& row : report.rows) values.push_back(row.estimate.p_hat);
  return {report.nondecreasing && report.target_ok,
          "Pr_0.6(H) " + list(values) + ", n=64 ci_low " +
              fmt(report.rows.back().estimate.ci_low) + " vs target 0.99"};
}

Verdict sharp_threshold_shadow() {
  WindowBudget budget;
  budget.initial_sweeps = 10000;
  budget.max_sweeps = 64000;
  budget.pivotal_samples = 10000;
  budget.pivotal_p = 0.5;
  std::vector<double> widths, pivotal;
  bool pass = true;
  for (int n : {8, 16, 32}) {
    const auto report = measure_window(aspect_rect(3, n), 0.1, RngSpec{kSeed}, budget);
    if (!widths.empty()) {
      pass = pass && report.width <= widths.back();
      pass = pass && report.max_pivotal.max.p_hat <= pivotal.back();
    }
    widths.push_back(report.width);
    pivotal.push_back(report.max_pivotal.max.p_hat);
  }
  return {pass, "widths " + list(widths) + ", max pivotal " + list(pivotal)};
}

Verdict arm_decay_check() {
  const int radii[] = {4, 8, 16, 32, 64};
  const auto report = arm_decay(0.5, radii, options(100000));
  std::vector<double> values;
  for (const auto& row : report.rows) values.push_back(row.estimate.p_hat);
  return {report.strictly_decreasing && report.nesting_violations == 0,
          "Pr(Arm r) " + list(values) + ", nesting violations " +
              std::to_string(report.nesting_violations)};
}

std::string run_cli(std::vector<std::string> args, int& code) {
  std::ostringstream out, err;
  code = cli::run(args, out, err);
  return out.str();
}

Verdict reproducibility() {
  const std::vector<std::vector<std::string>> commands = {
      {"crossing", "--rect", "24x8", "--p", "0.5", "--samples", "20000"},
      {"crossing", "--n", "8", "--event", "dual-crossing", "--samples", "20000"},
      {"crossing", "--event", "arm", "--radius", "16", "--samples", "20000"},
      {"sweep", "--rect", "24x8", "--samples", "20000"},
      {"window", "--n", "4,8", "--samples", "2000", "--max-samples", "8000",
       "--pivotal-samples", "1000"},
      {"rsw", "--n", "4,8,16", "--samples", "5000"},
      {"arm", "--radii", "4,8,16", "--samples", "5000"},
      {"lemma2", "--n", "4,8,16", "--samples", "5000"},
      {"pivotal-map", "--rect", "24x8", "--sample-index", "5"},
      {"oracle", "--rect", "3x2"},
  };
  std::size_t runs = 0, mismatches = 0, errors = 0;
  std::string first;
  for (const auto& base : commands) {
    for (const char* format : {"csv", "json"}) {
      std::string reference;
      for (const char* workers : {"1", "2", "4"}) {
        auto args = base;
        args.insert(args.end(), {"--seed", "7", "--format", format, "--workers", workers});
        int code = 0;
        const std::string payload = run_cli(args, code);
        ++runs;
        if (code != cli::kExitOk) ++errors;
        if (std::string(workers) == "1") {
          reference = payload;
        } else if (payload != reference) {
          ++mismatches;
          if (first.empty()) first = "; first mismatch: " + base[0] + " " + format;
        }
      }
    }
  }
  // Files written with --out must match as well.
  const auto dir = std::filesystem::temp_directory_path() / "percolab_acceptance";
  std::filesystem::create_directories(dir);
  std::string files[2];
  for (int i = 0; i < 2; ++i) {
    const auto path = (dir / ("rsw" + std::to_string(i) + ".csv")).string();
    int code = 0;
    run_cli({"rsw", "--n", "4,8", "--samples", "3000", "--seed", "7", "--workers",
             i == 0 ? "1" : "3", "--out", path},
            code);
    errors += code != cli::kExitOk;
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    files[i] = s.str();
  }
  std::filesystem::remove_all(dir);
  if (files[0] != files[1] || files[0].empty()) ++mismatches;
  return {mismatches == 0 && errors == 0,
          std::to_string(runs + 2) + " invocations, " + std::to_string(mismatches) +
              " mismatches, " + std::to_string(errors) + " errors" + first};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;  // 0: no runtime limit
    std::function<Verdict()> check;
  };
  const Criterion criteria[] = {
      {1, "oracle exactness", 1.0, oracle_exactness},
      {2, "duality dichotomy", 300.0, duality_dichotomy},
      {3, "Russo identity", 120.0, russo_identity},
      {4, "pivotal structure", 0.0, pivotal_structure},
      {5, "pivotal inequality scheme", 0.0, pivotal_inequalities},
      {6, "Monte Carlo vs oracle", 60.0, monte_carlo_vs_oracle},
      {7, "self-duality midpoint", 0.0, self_duality},
      {8, "RSW floor", 0.0, rsw_floor},
      {9, "crossing growth at p = 0.6", 0.0, lemma2},
      {10, "sharp-threshold shadow", 0.0, sharp_threshold_shadow},
      {11, "arm decay", 0.0, arm_decay_check},
      {12, "reproducibility across --workers", 0.0, reproducibility},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && seconds > c.limit_seconds) {
      v.pass = false;
      v.detail += " (runtime " + fmt(seconds) + " s exceeds " + fmt(c.limit_seconds) + " s)";
    }
    while (!v.detail.empty() && (v.detail.back() == ' ' || v.detail.back() == ';'))
      v.detail.pop_back();
    if (!v.pass) ++failures;
    std::printf("%s criterion %2d  %-34s %8.2fs  %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name,
                seconds, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures,
              std::size(criteria));
  return failures == 0 ? 0 : 1;
}
