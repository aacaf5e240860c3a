#include "percolab/cli.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "percolab/config.hpp"
#include "percolab/connectivity.hpp"
#include "percolab/lattice.hpp"
#include "percolab/montecarlo.hpp"
#include "percolab/oracle.hpp"
#include "percolab/pivotal.hpp"
#include "percolab/threshold.hpp"

namespace percolab::cli {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string csv_cell(const Json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    return s.find(',') == std::string::npos ? s : "\"" + s + "\"";
  }
  return v.dump();
}

std::string iso_utc(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 digest failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < length; ++i)
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return os.str();
}

unsigned default_workers() {
  if (const char* env = std::getenv("PERCOLAB_WORKERS")) {
    unsigned value = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc{} && ptr == text.data() + text.size() && value > 0) return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Tabular result: rows become CSV lines or JSON objects keyed by column.
struct Result {
  std::string command;
  Json parameters = Json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
  Json summary = Json::object();
  /// Replaces the envelope when set (the oracle's count format).
  Json raw;
};

struct Common {
  std::uint64_t seed = 1;
  unsigned workers = 0;
  std::string format = "csv";
  std::string out;
  double confidence = kDefaultConfidence;
};

std::string render(const Result& result, const Common& common) {
  if (!result.raw.is_null()) {
    if (common.format == "json") return result.raw.dump() + "\n";
    std::string text = "j,count\n";
    const auto& counts = result.raw["counts"];
    for (std::size_t j = 0; j < counts.size(); ++j)
      text += std::to_string(j) + "," + counts[j].dump() + "\n";
    return text;
  }
  if (common.format == "json") {
    Json doc;
    doc["command"] = result.command;
    doc["version"] = std::string(kVersion);
    doc["rng"] = {{"seed", common.seed}, {"algorithm", std::string(kRngAlgorithm)}};
    doc["parameters"] = result.parameters;
    Json rows = Json::array();
    for (const auto& row : result.rows) {
      Json obj = Json::object();
      for (std::size_t c = 0; c < result.columns.size(); ++c) obj[result.columns[c]] = row[c];
      rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    if (!result.summary.empty()) doc["summary"] = result.summary;
    return doc.dump(2) + "\n";
  }
  std::string text;
  for (std::size_t c = 0; c < result.columns.size(); ++c)
    text += (c ? "," : "") + result.columns[c];
  text += "\n";
  for (const auto& row : result.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) text += (c ? "," : "") + csv_cell(row[c]);
    text += "\n";
  }
  return text;
}

std::vector<Json> estimate_cells(double p, const Estimate& e) {
  return {p, e.p_hat, e.ci_low, e.ci_high, e.n, e.rng.seed};
}

const std::vector<std::string> kEstimateColumns = {"p", "estimate", "ci_low", "ci_high", "n", "seed"};

std::vector<std::string> with_prefix(std::string first) {
  std::vector<std::string> out{std::move(first)};
  out.insert(out.end(), kEstimateColumns.begin(), kEstimateColumns.end());
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream in(text);
  std::string piece;
  while (std::getline(in, piece, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(piece, &used));
      if (used != piece.size()) throw std::invalid_argument(piece);
    } catch (const std::exception&) {
      throw UsageError("malformed --grid '" + text + "', expected A:B:STEP");
    }
  }
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
    throw UsageError("malformed --grid '" + text + "', expected A:B:STEP with A <= B, STEP > 0");
  std::vector<double> grid;
  const double tolerance = parts[2] * 1e-9;
  for (std::size_t i = 0;; ++i) {
    double p = parts[0] + static_cast<double>(i) * parts[2];
    if (p > parts[1] + tolerance) break;
    grid.push_back(std::min(p, parts[1]));
  }
  return grid;
}

RunOptions run_options(const Common& common, std::uint64_t samples) {
  RunOptions options;
  options.samples = samples;
  options.rng.seed = common.seed;
  options.workers = common.workers;
  options.confidence = common.confidence;
  return options;
}

struct RectChoice {
  std::string rect;
  int aspect = kDefaultAspect;
  int n = 0;

  Rect resolve() const {
    if (!rect.empty()) return parse_rect(rect);
    if (n > 0) return aspect_rect(aspect, n);
    throw UsageError("give --rect KxL[@X,Y] or --n N (with optional --aspect)");
  }
};

// "3n" in --rect means aspect 3 and sizes from --n.
bool rect_is_aspect(const std::string& text, int& aspect) {
  if (text.size() < 2 || text.back() != 'n') return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size() - 1, aspect);
  return ec == std::errc{} && ptr == text.data() + text.size() - 1 && aspect > 0;
}

Json ints_json(const std::vector<int>& values) {
  Json out = Json::array();
  for (int v : values) out.push_back(v);
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"percolab: bond percolation on rectangles of the square lattice"};
  app.name("percolab");
  app.require_subcommand(1);
  app.footer(
      "Estimates carry Wilson score intervals (default confidence 0.95). Worker count comes from\n"
      "--workers, else PERCOLAB_WORKERS, else the hardware thread count; it never changes the\n"
      "numbers. Exit codes: 0 ok, 2 usage error, 3 enumeration size refusal (oracle E <= 24).");

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "64-bit seed for the keyed random streams")
        ->capture_default_str();
    sub->add_option("--workers", common.workers,
                    "worker threads (default: PERCOLAB_WORKERS, else hardware threads)");
    sub->add_option("--format", common.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--out", common.out,
                    "write the payload to PATH and a manifest to PATH.manifest.json");
    sub->add_option("--confidence", common.confidence, "confidence level of reported intervals")
        ->capture_default_str();
  };

  RectChoice rect_choice;
  double p = 0.5;
  std::uint64_t samples = 10000;
  std::string event = "crossing";
  int radius = 8;
  std::string grid_text = "0:1:0.05";
  std::vector<int> window_sizes{8, 16, 32};
  std::vector<int> rsw_sizes{8, 16, 32, 64};
  std::vector<int> lemma2_sizes{8, 16, 32, 64};
  double lemma2_p = 0.6;
  std::vector<int> radii{4, 8, 16, 32, 64};
  double eps = 0.1;
  std::uint64_t max_samples = 64000;
  std::uint64_t pivotal_samples = 2000;
  double resolution = 1e-3;
  double floor = 0.01;
  double max_step = 0.05;
  double target = 0.99;
  std::uint64_t sample_index = 0;
  std::size_t edge = 0;

  auto add_rect = [&](CLI::App* sub) {
    sub->add_option("--rect", rect_choice.rect, "rectangle KxL[@X,Y]");
    sub->add_option("--aspect", rect_choice.aspect, "aspect ratio for --n")->capture_default_str();
    sub->add_option("--n", rect_choice.n, "height n of an (aspect*n)-by-n rectangle");
  };
  auto add_sizes = [&](CLI::App* sub, std::vector<int>& target) {
    sub->add_option("--rect", rect_choice.rect, "'3n' style aspect shorthand or a single KxL");
    sub->add_option("--aspect", rect_choice.aspect, "aspect ratio")->capture_default_str();
    sub->add_option("--n", target, "comma-separated heights n")->delimiter(',')->capture_default_str();
  };

  auto* crossing = app.add_subcommand("crossing", "estimate Pr_p of one event at fixed p");
  add_common(crossing);
  add_rect(crossing);
  crossing->add_option("--p", p, "edge probability")->capture_default_str();
  crossing->add_option("--samples", samples, "sample count")->capture_default_str();
  crossing->add_option("--event", event, "event to estimate")
      ->check(CLI::IsMember({"crossing", "dual-crossing", "arm"}))
      ->capture_default_str();
  crossing->add_option("--radius", radius, "arm radius about the origin (event arm)")
      ->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "crossing curve p -> Pr_p(H) from coupled sweeps");
  add_common(sweep);
  add_rect(sweep);
  sweep->add_option("--grid", grid_text, "probability grid A:B:STEP")->capture_default_str();
  sweep->add_option("--samples", samples, "sweep count")->capture_default_str();

  auto* window = app.add_subcommand("window", "threshold window width and max pivotal probability");
  add_common(window);
  add_sizes(window, window_sizes);
  window->add_option("--eps", eps, "window level epsilon in (0, 1/2)")->capture_default_str();
  window->add_option("--samples", samples, "initial sweeps per bisection")->capture_default_str();
  window->add_option("--max-samples", max_samples, "sweep budget per rectangle")
      ->capture_default_str();
  window->add_option("--pivotal-samples", pivotal_samples, "samples for the max pivotal estimate")
      ->capture_default_str();
  window->add_option("--resolution", resolution, "bisection resolution in p")->capture_default_str();

  auto* rsw = app.add_subcommand("rsw", "crossing probabilities at p = 1/2 against a floor");
  add_common(rsw);
  add_sizes(rsw, rsw_sizes);
  rsw->add_option("--p", p, "edge probability")->capture_default_str();
  rsw->add_option("--samples", samples, "samples per rectangle")->capture_default_str();
  rsw->add_option("--floor", floor, "required lower bound c0")->capture_default_str();
  rsw->add_option("--max-step", max_step, "largest allowed change between successive n")
      ->capture_default_str();

  auto* arm = app.add_subcommand("arm", "arm probabilities about the origin");
  add_common(arm);
  arm->add_option("--radii", radii, "comma-separated increasing radii")
      ->delimiter(',')
      ->capture_default_str();
  arm->add_option("--p", p, "edge probability")->capture_default_str();
  arm->add_option("--samples", samples, "sample count")->capture_default_str();

  auto* lemma2 = app.add_subcommand("lemma2", "crossing probabilities at fixed p > 1/2 as n grows");
  add_common(lemma2);
  add_sizes(lemma2, lemma2_sizes);
  lemma2->add_option("--p", lemma2_p, "edge probability (> 1/2)")->capture_default_str();
  lemma2->add_option("--target", target, "required lower bound at the largest n")
      ->capture_default_str();
  lemma2->add_option("--samples", samples, "sweeps per rectangle")->capture_default_str();

  auto* pivotal_map = app.add_subcommand("pivotal-map", "pivotal edges of one sampled configuration");
  add_common(pivotal_map);
  add_rect(pivotal_map);
  pivotal_map->add_option("--p", p, "edge probability")->capture_default_str();
  pivotal_map->add_option("--sample-index", sample_index, "which keyed sample to draw")
      ->capture_default_str();

  auto* oracle_cmd =
      app.add_subcommand("oracle", "exact counts by enumeration (E <= 24); JSON unless --format csv");
  add_common(oracle_cmd);
  oracle_cmd->add_option("--rect", rect_choice.rect, "rectangle KxL[@X,Y]")->required();
  oracle_cmd->add_option("--event", event, "event to count")
      ->check(CLI::IsMember({"crossing", "dual-crossing", "pivotal"}))
      ->capture_default_str();
  oracle_cmd->add_option("--edge", edge, "edge index (event pivotal)")->capture_default_str();

  // CLI11 consumes arguments from the back.
  std::vector<std::string> argv_copy(args.rbegin(), args.rend());

  try {
    app.parse(argv_copy);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (common.workers == 0) common.workers = default_workers();
  if (oracle_cmd->parsed() && oracle_cmd->count("--format") == 0) common.format = "json";
  const auto started = std::chrono::system_clock::now();
  const auto clock_start = std::chrono::steady_clock::now();

  Result result;
  result.command = app.get_subcommands().front()->get_name();
  try {
    auto& params = result.parameters;
    params["confidence"] = common.confidence;
    if (crossing->parsed()) {
      check_probability(p);
      EventId id = Arm{{0, 0}, radius};
      Rect rect(1, 1);
      if (event == "arm") {
        if (radius < 0) throw UsageError("--radius must be nonnegative");
        id = Arm{{0, 0}, radius};
        rect = support(id);
        params["radius"] = radius;
      } else {
        rect = rect_choice.resolve();
        id = event == "crossing" ? EventId{HorizontalCrossing{rect}} : EventId{VerticalDualCrossing{rect}};
      }
      params["event"] = event;
      params["rect"] = format_rect(rect);
      params["p"] = p;
      params["samples"] = samples;
      const Estimate e = estimate_event(id, p, run_options(common, samples));
      result.columns = kEstimateColumns;
      result.rows.push_back(estimate_cells(p, e));
    } else if (sweep->parsed()) {
      const Rect rect = rect_choice.resolve();
      const auto grid = parse_grid(grid_text);
      params["rect"] = format_rect(rect);
      params["grid"] = grid_text;
      params["samples"] = samples;
      const Curve curve = estimate_curve(rect, grid, run_options(common, samples));
      result.columns = kEstimateColumns;
      for (std::size_t i = 0; i < grid.size(); ++i)
        result.rows.push_back(estimate_cells(grid[i], curve.points[i]));
    } else if (window->parsed()) {
      std::vector<Rect> rects;
      int aspect = rect_choice.aspect;
      if (!rect_choice.rect.empty() && !rect_is_aspect(rect_choice.rect, aspect)) {
        rects.push_back(parse_rect(rect_choice.rect));
      } else {
        for (int n : window_sizes) rects.push_back(aspect_rect(aspect, n));
        params["aspect"] = aspect;
        params["n"] = ints_json(window_sizes);
      }
      WindowBudget budget;
      budget.initial_sweeps = samples;
      budget.max_sweeps = std::max(samples, max_samples);
      budget.pivotal_samples = pivotal_samples;
      budget.resolution = resolution;
      budget.workers = common.workers;
      budget.confidence = common.confidence;
      params["eps"] = eps;
      params["samples"] = samples;
      params["max_samples"] = budget.max_sweeps;
      params["pivotal_samples"] = pivotal_samples;
      params["resolution"] = resolution;
      result.columns = {"rect", "epsilon", "p_low", "p_high", "width", "low_resolved",
                        "high_resolved", "sweeps", "max_pivotal", "max_pivotal_ci_low",
                        "max_pivotal_ci_high", "max_pivotal_edge", "pivotal_samples", "seed"};
      bool widths_ok = true;
      bool pivotal_ok = true;
      std::optional<WindowReport> previous;
      for (const Rect& rect : rects) {
        const WindowReport w = measure_window(rect, eps, RngSpec{common.seed}, budget);
        result.rows.push_back({format_rect(rect), eps, w.p_low(), w.p_high(), w.width,
                               w.low.resolved, w.high.resolved, w.sweeps, w.max_pivotal.max.p_hat,
                               w.max_pivotal.max.ci_low, w.max_pivotal.max.ci_high,
                               w.max_pivotal.edge, w.max_pivotal.max.n, common.seed});
        if (previous) {
          widths_ok = widths_ok && w.width <= previous->width;
          pivotal_ok = pivotal_ok && w.max_pivotal.max.p_hat <= previous->max_pivotal.max.p_hat;
        }
        previous = w;
      }
      result.summary["width_nonincreasing"] = widths_ok;
      result.summary["max_pivotal_nonincreasing"] = pivotal_ok;
    } else if (rsw->parsed()) {
      params["aspect"] = rect_choice.aspect;
      params["n"] = ints_json(rsw_sizes);
      params["p"] = p;
      params["samples"] = samples;
      params["floor"] = floor;
      params["max_step"] = max_step;
      check_probability(p);
      const RswReport report =
          rsw_floor_check(rsw_sizes, p, run_options(common, samples), floor, rect_choice.aspect, max_step);
      result.columns = with_prefix("rect");
      for (const auto& row : report.rows) {
        auto cells = estimate_cells(p, row.estimate);
        cells.insert(cells.begin(), format_rect(row.rect));
        result.rows.push_back(std::move(cells));
      }
      result.summary["floor_ok"] = report.floor_ok;
      result.summary["stable_ok"] = report.stable_ok;
    } else if (arm->parsed()) {
      params["radii"] = ints_json(radii);
      params["p"] = p;
      params["samples"] = samples;
      const ArmReport report = arm_decay(p, radii, run_options(common, samples));
      result.columns = with_prefix("radius");
      for (const auto& row : report.rows) {
        auto cells = estimate_cells(p, row.estimate);
        cells.insert(cells.begin(), row.radius);
        result.rows.push_back(std::move(cells));
      }
      result.summary["nesting_violations"] = report.nesting_violations;
      result.summary["strictly_decreasing"] = report.strictly_decreasing;
    } else if (lemma2->parsed()) {
      params["aspect"] = rect_choice.aspect;
      params["n"] = ints_json(lemma2_sizes);
      params["p"] = lemma2_p;
      params["samples"] = samples;
      params["target"] = target;
      const Lemma2Report report = lemma2_check(lemma2_p, lemma2_sizes, target,
                                               run_options(common, samples), rect_choice.aspect);
      result.columns = with_prefix("rect");
      for (const auto& row : report.rows) {
        auto cells = estimate_cells(lemma2_p, row.estimate);
        cells.insert(cells.begin(), format_rect(row.rect));
        result.rows.push_back(std::move(cells));
      }
      result.summary["nondecreasing"] = report.nondecreasing;
      result.summary["target_ok"] = report.target_ok;
    } else if (pivotal_map->parsed()) {
      const Rect rect = rect_choice.resolve();
      params["rect"] = format_rect(rect);
      params["p"] = p;
      params["sample_index"] = sample_index;
      const Configuration omega = sample(rect, p, RngSpec{common.seed}, sample_index);
      result.columns = {"edge", "x", "y", "orientation"};
      for (std::size_t i : pivotal_set(rect, omega)) {
        const Edge e = rect.edge_at(i);
        result.rows.push_back({i, e.origin.x, e.origin.y,
                               e.orientation == Orientation::horizontal ? "horizontal" : "vertical"});
      }
      result.summary["crossing"] = has_horizontal_crossing(rect, omega);
    } else if (oracle_cmd->parsed()) {
      const Rect rect = parse_rect(rect_choice.rect);
      params["rect"] = format_rect(rect);
      params["event"] = event;
      oracle::CrossingPolynomial poly{rect, {}};
      Json doc;
      doc["rect"] = format_rect(rect);
      doc["event"] = event;
      if (event == "pivotal") {
        if (rect.edge_count() > oracle::kEventEdgeCap)
          throw oracle::EnumerationTooLarge(rect.edge_count(), oracle::kEventEdgeCap);
        poly = oracle::exact_pivotal_probability(rect, rect.edge_at(edge));
        doc["edge"] = edge;
        params["edge"] = edge;
      } else if (event == "crossing") {
        poly = oracle::exact_probability(HorizontalCrossing{rect}, rect);
      } else {
        poly = oracle::exact_probability(VerticalDualCrossing{rect}, rect);
      }
      doc["counts"] = poly.counts;
      result.raw = std::move(doc);
    }
  } catch (const oracle::EnumerationTooLarge& e) {
    err << "percolab: " << e.what() << "\n";
    return kExitRefused;
  } catch (const UsageError& e) {
    err << "percolab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "percolab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "percolab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "percolab: " << e.what() << "\n";
    return kExitFailure;
  }

  const std::string payload = render(result, common);
  if (common.out.empty()) {
    out << payload;
    return kExitOk;
  }

  {
    std::ofstream file(common.out, std::ios::binary);
    if (!(file << payload)) {
      err << "percolab: cannot write " << common.out << "\n";
      return kExitFailure;
    }
  }
  Json manifest;
  manifest["command"] = result.command;
  manifest["version"] = std::string(kVersion);
  manifest["argv"] = args;
  manifest["parameters"] = result.parameters;
  manifest["rng"] = {{"seed", common.seed}, {"algorithm", std::string(kRngAlgorithm)}};
  manifest["workers"] = common.workers;
  manifest["format"] = common.format;
  manifest["started_at"] = iso_utc(started);
  manifest["finished_at"] = iso_utc(std::chrono::system_clock::now());
  manifest["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
  manifest["outputs"] = Json::array(
      {{{"path", common.out}, {"bytes", payload.size()}, {"sha256", sha256_hex(payload)}}});
  if (!result.summary.empty()) manifest["summary"] = result.summary;
  std::ofstream(common.out + ".manifest.json", std::ios::binary) << manifest.dump(2) << "\n";
  return kExitOk;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace percolab::cli
