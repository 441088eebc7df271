#include <doctest.h>

#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "otpml/config.hpp"

using namespace otpml;
using testing::throws;

TEST_CASE("empty text gives every default") {
  const RunConfig c = parse_config("");
  CHECK_FALSE(c.csv_path.has_value());
  CHECK(c.generator.seed == 42);
  CHECK(c.generator.n_rows == 10000);
  CHECK(c.test_fraction == 0.2);
  CHECK(c.n_runs == 10);
  CHECK(c.knn_k == 5);
  CHECK(c.tree_max_depth == 4);
  CHECK(c.forest_n_estimators == 100);
  CHECK(c.weights == EnsembleWeights{30, 25, 10, 1, 10});
}

TEST_CASE("keys, comments and whitespace") {
  const RunConfig c = parse_config(
      "# a comment\n"
      "tree.max_depth=4\n"
      "  ensemble.weights.knn = 25   # trailing\n"
      "knn.k = 7\r\n"
      "\n"
      "generator.correlation = 0.1, 0.2, 0.0, 0.3, 0.0, 0.0\n"
      "generator.effect.late_arrival = 2.5\n"
      "generator.marginal.missing = 3, 0.2\n"
      "generator.start_date = 2021-01-31\n");
  CHECK(c.tree_max_depth == 4);
  CHECK(c.weights.knn == 25);
  CHECK(c.knn_k == 7);
  CHECK(c.generator.target_correlation[1][2] == 0.3);
  CHECK(c.generator.target_correlation[2][1] == 0.3);
  CHECK(c.generator.effect_weights[1] == 2.5);
  CHECK(c.generator.missing.scale == 3);
  CHECK(c.generator.missing.spread == 0.2);
}

TEST_CASE("overrides apply after the file") {
  const std::vector<std::string> sets = {"knn.k=9", "eval.n_runs = 3"};
  const RunConfig c = parse_config("knn.k = 7\n", sets);
  CHECK(c.knn_k == 9);
  CHECK(c.n_runs == 3);
}

TEST_CASE("config errors") {
  CHECK(throws([] { parse_config("tree.depth = 4\n"); }, ErrorKind::UnknownKey));
  CHECK(throws([] { parse_config("generator.effect.speed = 1\n"); }, ErrorKind::UnknownKey));
  CHECK(throws([] { parse_config("knn.k = five\n"); }, ErrorKind::BadValue));
  CHECK(throws([] { parse_config("knn.k = -1\n"); }, ErrorKind::BadValue));
  CHECK(throws([] { parse_config("knn.k = 0\n"); }, ErrorKind::BadValue));
  CHECK(throws([] { parse_config("split.test_fraction = 1.5\n"); }, ErrorKind::BadValue));
  CHECK(throws([] { parse_config("generator.correlation = 0.1, 0.2\n"); }, ErrorKind::BadValue));
  CHECK(throws([] { parse_config("generator.start_date = 2021-02-30\n"); }, ErrorKind::BadValue));
  CHECK(throws([] { parse_config("just words\n"); }, ErrorKind::BadValue));
  CHECK(throws([] { parse_config("ensemble.weights.knn = -2\n"); }, ErrorKind::BadValue));
  CHECK(throws([] { parse_config("input.csv = a.csv\ngenerator.seed = 3\n"); }, ErrorKind::ConflictingSources));
  CHECK(throws([] { parse_config("generator.correlation = 0.99, -0.99, 0, 0.99, 0, 0\n"); },
               ErrorKind::NotPositiveDefinite));
  CHECK(throws([] { load_config("/nonexistent/run.conf"); }, ErrorKind::Io));
}

TEST_CASE("rendered config parses back to the same values") {
  const std::vector<std::string> sets = {"knn.k=3", "generator.noise_sd=0.3", "generator.effect.east=-1.25",
                                         "ensemble.weights.logistic=2.5", "generator.correlation=0.1,0.2,0,0.3,0,0.05"};
  const RunConfig a = parse_config("", sets);
  const std::string text = to_config_text(a);
  const RunConfig b = parse_config(text);
  CHECK(to_config_text(b) == text);
  CHECK(b.knn_k == 3);
  CHECK(b.generator.noise_sd == 0.3);
  CHECK(b.generator.effect_weights[6] == -1.25);
  CHECK(b.generator.target_correlation == a.generator.target_correlation);

  const RunConfig csv = parse_config("input.csv = data/x.csv\n");
  CHECK(parse_config(to_config_text(csv)).csv_path == csv.csv_path);
}

TEST_CASE("the committed default config matches the built-in defaults") {
  const RunConfig file = load_config(OTPML_SOURCE_DIR "/configs/default.conf");
  CHECK(to_config_text(file) == to_config_text(parse_config("")));
}
