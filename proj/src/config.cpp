#include "otpml/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "otpml/dataset.hpp"
#include "otpml/error.hpp"

namespace otpml {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view why) {
  throw Error(ErrorKind::BadValue, fmt::format("{} = '{}': {}", key, value, why));
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty() || !std::isfinite(out)) {
    bad_value(key, v, "expected a finite number");
  }
  return out;
}

std::uint64_t parse_u64(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) bad_value(key, v, "expected a non-negative integer");
  return out;
}

std::int64_t parse_i64(std::string_view key, std::string_view v) {
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) bad_value(key, v, "expected an integer");
  return out;
}

std::vector<double> parse_list(std::string_view key, std::string_view v, std::size_t expected) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = v.find(',', start);
    out.push_back(parse_double(key, trim(v.substr(start, comma == std::string_view::npos ? v.npos : comma - start))));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.size() != expected) bad_value(key, v, fmt::format("expected {} comma-separated numbers", expected));
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

constexpr std::array<std::pair<int, int>, 6> kCorrelationPairs = {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
constexpr std::array<std::string_view, 8> kEffectNames = {"early_departure", "late_arrival", "missing", "avg_dwell_time",
                                                           "north",           "south",        "east",    "west"};

class ConfigBuilder {
 public:
  void apply(std::string_view key, std::string_view value) {
    if (key.starts_with("generator.")) generator_touched_ = true;
    if (key == "input.csv") {
      if (value.empty()) bad_value(key, value, "expected a path");
      cfg_.csv_path = std::filesystem::path(std::string(value));
    } else if (key == "generator.n_rows") {
      cfg_.generator.n_rows = parse_u64(key, value);
    } else if (key == "generator.seed") {
      cfg_.generator.seed = parse_u64(key, value);
    } else if (key == "generator.route_min") {
      cfg_.generator.route_min = parse_i64(key, value);
    } else if (key == "generator.route_max") {
      cfg_.generator.route_max = parse_i64(key, value);
    } else if (key == "generator.noise_sd") {
      cfg_.generator.noise_sd = parse_double(key, value);
    } else if (key == "generator.route_quality_bonus") {
      cfg_.generator.route_quality_bonus = parse_double(key, value);
    } else if (key == "generator.otp_base") {
      cfg_.generator.otp_base = parse_double(key, value);
    } else if (key == "generator.dwell_mean") {
      cfg_.generator.dwell_mean = parse_double(key, value);
    } else if (key == "generator.dwell_sd") {
      cfg_.generator.dwell_sd = parse_double(key, value);
    } else if (key == "generator.start_date") {
      const auto records = parse_csv_date(key, value);
      cfg_.generator.start_date = records;
    } else if (key == "generator.correlation") {
      const auto v = parse_list(key, value, kCorrelationPairs.size());
      for (std::size_t i = 0; i < v.size(); ++i) {
        const auto [a, b] = kCorrelationPairs[i];
        cfg_.generator.target_correlation[a][b] = cfg_.generator.target_correlation[b][a] = v[i];
      }
    } else if (key.starts_with("generator.marginal.")) {
      const auto name = key.substr(std::string_view("generator.marginal.").size());
      CountMarginal* m = name == "early_departure" ? &cfg_.generator.early_departure
                         : name == "late_arrival"  ? &cfg_.generator.late_arrival
                         : name == "missing"       ? &cfg_.generator.missing
                                                   : nullptr;
      if (!m) throw Error(ErrorKind::UnknownKey, std::string(key));
      const auto v = parse_list(key, value, 2);
      *m = CountMarginal{v[0], v[1]};
    } else if (key.starts_with("generator.effect.")) {
      const auto name = key.substr(std::string_view("generator.effect.").size());
      const auto it = std::find(kEffectNames.begin(), kEffectNames.end(), name);
      if (it == kEffectNames.end()) throw Error(ErrorKind::UnknownKey, std::string(key));
      cfg_.generator.effect_weights[static_cast<std::size_t>(it - kEffectNames.begin())] = parse_double(key, value);
    } else if (key == "split.test_fraction") {
      cfg_.test_fraction = parse_double(key, value);
    } else if (key == "eval.n_runs") {
      cfg_.n_runs = parse_u64(key, value);
    } else if (key == "eval.base_seed") {
      cfg_.base_seed = parse_u64(key, value);
    } else if (key == "tree.max_depth") {
      cfg_.tree_max_depth = parse_u64(key, value);
    } else if (key == "tree.min_samples_split") {
      cfg_.tree_min_samples_split = parse_u64(key, value);
    } else if (key == "forest.n_estimators") {
      cfg_.forest_n_estimators = parse_u64(key, value);
    } else if (key == "forest.threads") {
      cfg_.forest_threads = parse_u64(key, value);
    } else if (key == "knn.k") {
      cfg_.knn_k = parse_u64(key, value);
    } else if (key == "ensemble.weights.decision_tree") {
      cfg_.weights.decision_tree = parse_double(key, value);
    } else if (key == "ensemble.weights.knn") {
      cfg_.weights.knn = parse_double(key, value);
    } else if (key == "ensemble.weights.random_forest") {
      cfg_.weights.random_forest = parse_double(key, value);
    } else if (key == "ensemble.weights.naive_bayes") {
      cfg_.weights.naive_bayes = parse_double(key, value);
    } else if (key == "ensemble.weights.logistic") {
      cfg_.weights.logistic = parse_double(key, value);
    } else if (key == "report.output_dir") {
      if (value.empty()) bad_value(key, value, "expected a path");
      cfg_.output_dir = std::filesystem::path(std::string(value));
    } else {
      throw Error(ErrorKind::UnknownKey, std::string(key));
    }
  }

  void apply_line(std::string_view raw, std::size_t line_no) {
    const auto hash = raw.find('#');
    const auto line = trim(raw.substr(0, hash));
    if (line.empty()) return;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::BadValue, fmt::format("line {}: expected 'key = value'", line_no));
    }
    apply(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }

  RunConfig finish() {
    if (cfg_.csv_path && generator_touched_) {
      throw Error(ErrorKind::ConflictingSources, "input.csv and generator.* settings are both present");
    }
    cfg_.validate();
    return cfg_;
  }

 private:
  static std::chrono::year_month_day parse_csv_date(std::string_view key, std::string_view value) {
    if (value.size() != 10 || value[4] != '-' || value[7] != '-') bad_value(key, value, "expected YYYY-MM-DD");
    const auto y = parse_i64(key, value.substr(0, 4));
    const auto m = parse_u64(key, value.substr(5, 2));
    const auto d = parse_u64(key, value.substr(8, 2));
    const std::chrono::year_month_day date{std::chrono::year{static_cast<int>(y)},
                                           std::chrono::month{static_cast<unsigned>(m)},
                                           std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok()) bad_value(key, value, "not a calendar date");
    return date;
  }

  RunConfig cfg_;
  bool generator_touched_ = false;
};

}  // namespace

void RunConfig::validate() const {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorKind::BadValue, "split.test_fraction must lie in (0, 1)");
  }
  if (n_runs < 1) throw Error(ErrorKind::BadValue, "eval.n_runs must be >= 1");
  if (tree_max_depth < 1) throw Error(ErrorKind::BadValue, "tree.max_depth must be >= 1");
  if (tree_min_samples_split < 2) throw Error(ErrorKind::BadValue, "tree.min_samples_split must be >= 2");
  if (forest_n_estimators < 1) throw Error(ErrorKind::BadValue, "forest.n_estimators must be >= 1");
  if (knn_k < 1) throw Error(ErrorKind::BadValue, "knn.k must be >= 1");
  const double w[] = {weights.decision_tree, weights.knn, weights.random_forest, weights.naive_bayes,
                      weights.logistic};
  bool any = false;
  for (double v : w) {
    if (!(v >= 0.0)) throw Error(ErrorKind::BadValue, "ensemble weights must be >= 0");
    any = any || v > 0.0;
  }
  if (!any) throw Error(ErrorKind::BadValue, "at least one ensemble weight must be positive");
  if (!csv_path) {
    try {
      generator.validate();
    } catch (const Error& e) {
      throw e.with_context("generator");
    }
  }
}

RunConfig parse_config(std::string_view text, std::span<const std::string> overrides) {
  ConfigBuilder builder;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    const auto line = text.substr(start, nl == std::string_view::npos ? text.npos : nl - start);
    builder.apply_line(line, ++line_no);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::BadValue, "override '" + o + "' is not key=value");
    builder.apply(trim(std::string_view(o).substr(0, eq)), trim(std::string_view(o).substr(eq + 1)));
  }
  return builder.finish();
}

RunConfig load_config(const std::filesystem::path& path, std::span<const std::string> overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), overrides);
}

std::string to_config_text(const RunConfig& cfg) {
  std::string out;
  auto put = [&out](std::string_view key, const std::string& value) { out += fmt::format("{} = {}\n", key, value); };
  if (cfg.csv_path) {
    put("input.csv", cfg.csv_path->string());
  } else {
    const auto& g = cfg.generator;
    put("generator.n_rows", std::to_string(g.n_rows));
    put("generator.seed", std::to_string(g.seed));
    put("generator.route_min", std::to_string(g.route_min));
    put("generator.route_max", std::to_string(g.route_max));
    put("generator.start_date", format_date(g.start_date));
    std::string corr;
    for (std::size_t i = 0; i < kCorrelationPairs.size(); ++i) {
      if (i) corr += ", ";
      corr += fmt_double(g.target_correlation[kCorrelationPairs[i].first][kCorrelationPairs[i].second]);
    }
    put("generator.correlation", corr);
    put("generator.marginal.early_departure", fmt_double(g.early_departure.scale) + ", " + fmt_double(g.early_departure.spread));
    put("generator.marginal.late_arrival", fmt_double(g.late_arrival.scale) + ", " + fmt_double(g.late_arrival.spread));
    put("generator.marginal.missing", fmt_double(g.missing.scale) + ", " + fmt_double(g.missing.spread));
    put("generator.dwell_mean", fmt_double(g.dwell_mean));
    put("generator.dwell_sd", fmt_double(g.dwell_sd));
    for (std::size_t i = 0; i < kEffectNames.size(); ++i) {
      put(fmt::format("generator.effect.{}", kEffectNames[i]), fmt_double(g.effect_weights[i]));
    }
    put("generator.route_quality_bonus", fmt_double(g.route_quality_bonus));
    put("generator.otp_base", fmt_double(g.otp_base));
    put("generator.noise_sd", fmt_double(g.noise_sd));
  }
  put("split.test_fraction", fmt_double(cfg.test_fraction));
  put("eval.n_runs", std::to_string(cfg.n_runs));
  put("eval.base_seed", std::to_string(cfg.base_seed));
  put("tree.max_depth", std::to_string(cfg.tree_max_depth));
  put("tree.min_samples_split", std::to_string(cfg.tree_min_samples_split));
  put("forest.n_estimators", std::to_string(cfg.forest_n_estimators));
  put("forest.threads", std::to_string(cfg.forest_threads));
  put("knn.k", std::to_string(cfg.knn_k));
  put("ensemble.weights.decision_tree", fmt_double(cfg.weights.decision_tree));
  put("ensemble.weights.knn", fmt_double(cfg.weights.knn));
  put("ensemble.weights.random_forest", fmt_double(cfg.weights.random_forest));
  put("ensemble.weights.naive_bayes", fmt_double(cfg.weights.naive_bayes));
  put("ensemble.weights.logistic", fmt_double(cfg.weights.logistic));
  put("report.output_dir", cfg.output_dir.string());
  return out;
}

}  // namespace otpml
