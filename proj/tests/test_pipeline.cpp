#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <fmt/format.h>

#include "helpers.hpp"
#include "otpml/pipeline.hpp"
#include "otpml/synth.hpp"
#include "otpml/tree.hpp"

using namespace otpml;
namespace fs = std::filesystem;

namespace {

RunConfig small_config() {
  const std::vector<std::string> sets = {"generator.n_rows=1500", "eval.n_runs=2", "forest.n_estimators=15"};
  return parse_config("", sets);
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / fmt::format("otpml_test_{}_{}", name, ::getpid());
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const int status = std::system(fmt::format("{} {} >/dev/null 2>&1", OTPML_CLI, args).c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("bundle contents and model rows") {
  const ReportBundle b = run_pipeline(small_config());
  std::vector<std::string> names;
  for (const auto& a : b.artifacts) names.push_back(a.name);
  CHECK(names == std::vector<std::string>{"calibration.txt", "correlation.txt", "tree_full.txt", "tree_depth4.txt",
                                          "tree_no_late_arrival.txt", "importance.txt", "logit_summary.txt",
                                          "poisson_summary.txt", "accuracy.txt"});
  const std::string& acc = *b.find("accuracy.txt");
  std::istringstream lines(acc);
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  for (auto model : kModelNames) {
    REQUIRE(std::getline(lines, line));
    CHECK(line.rfind(std::string(model) + " ", 0) == 0);
  }
  CHECK(b.find("tree_depth4.txt")->find("[d5]") == std::string::npos);
  CHECK(b.find("logit_summary.txt")->find("Pseudo R-squ.") != std::string::npos);
  CHECK(b.find("nope.txt") == nullptr);
}

TEST_CASE("accuracy numbers come straight from the eval module") {
  const RunConfig cfg = small_config();
  const ReportBundle b = run_pipeline(cfg);
  const FeaturizedDataset d = load_input(cfg);
  const auto results = repeated_mean_accuracies(model_suite(cfg), d, cfg.n_runs, cfg.base_seed, cfg.test_fraction);
  for (const auto& r : results) {
    CHECK(b.find("accuracy.txt")->find(fmt::format("{:<18} {:>7.4f} ", r.name, r.mean)) != std::string::npos);
  }

  // the unrestricted tree row, rebuilt with nothing but public calls
  const Recipe tree = [](const FeaturizedDataset& data, const SplitIndices& split) {
    const auto names = feature_names();
    const auto x = select_columns(data.table(), names, columns::bus_target).x;
    return predict_tree(fit_tree(gather_rows(x, split.train).view(), labels_for(data, split.train)),
                        gather_rows(x, split.test).view());
  };
  const auto direct = repeated_mean_accuracy(tree, d, cfg.n_runs, cfg.base_seed, cfg.test_fraction);
  CHECK(direct.per_run == results[0].per_run);
}

TEST_CASE("a later model error leaves the earlier files behind") {
  const fs::path dir = scratch("partial");
  auto recs = generate(GeneratorConfig{.n_rows = 600}).to_records();
  for (auto& r : recs) r.otp = std::min(*r.otp, 80.0);  // nobody is on time
  write_csv(dir / "all_late.csv", recs);

  const std::vector<std::string> sets = {"input.csv=" + (dir / "all_late.csv").string(), "eval.n_runs=1"};
  const RunConfig cfg = parse_config("", sets);
  std::vector<std::string> written;
  try {
    run_pipeline(cfg, [&](const ReportArtifact& a) {
      write_artifact(dir / "out", a);
      written.push_back(a.name);
    });
    FAIL("expected a model error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingleClassInput);
    CHECK(is_model_error(e.kind()));
    CHECK(std::string(e.what()).find("SingleClassInput") != std::string::npos);
  }
  REQUIRE_FALSE(written.empty());
  CHECK(slurp(dir / "out" / "correlation.txt").find("late_arrival") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "out" / "accuracy.txt"));
  fs::remove_all(dir);
}

TEST_CASE("cli exit codes and files") {
  const fs::path dir = scratch("cli");
  const std::string csv = (dir / "d.csv").string();
  CHECK(run_cli(fmt::format("generate --set generator.n_rows=400 --out {}", csv)) == 0);
  CHECK(load_csv(csv).size() == 400);
  CHECK(run_cli(fmt::format("corr --set input.csv={}", csv)) == 0);
  CHECK(run_cli("train --set tree.depth=3") == 1);
  CHECK(run_cli("train --set knn.k=zero") == 1);
  CHECK(run_cli("train --config /nonexistent.conf") == 1);
  CHECK(run_cli("frobnicate") == 1);
  CHECK(run_cli("generate --set generator.correlation=0.99,-0.99,0,0.99,0,0") == 2);

  auto recs = load_csv(csv);
  for (auto& r : recs) r.otp = 99.0;
  write_csv(dir / "all_good.csv", recs);
  CHECK(run_cli(fmt::format("report --set input.csv={} --out {}", (dir / "all_good.csv").string(),
                            (dir / "rep").string())) == 2);
  CHECK(fs::exists(dir / "rep" / "correlation.txt"));

  CHECK(run_cli(fmt::format("report --set generator.n_rows=600 eval.n_runs=1 forest.n_estimators=5 --out {}",
                            (dir / "ok").string())) == 0);
  CHECK(fs::exists(dir / "ok" / "accuracy.txt"));
  CHECK(fs::exists(dir / "ok" / "calibration.txt"));
  fs::remove_all(dir);
}
