#include <doctest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "otpml/stats.hpp"
#include "otpml/synth.hpp"

using namespace otpml;
using testing::throws;

TEST_CASE("default generator hits the target correlations") {
  const GeneratorConfig cfg;
  const auto d = generate(cfg);
  CHECK(d.n_rows() == 10000);
  const auto s = summarize_calibration(d);
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      CHECK(std::abs(s.empirical_correlation[i][j] - cfg.target_correlation[i][j]) <= 0.05);
    }
  }
  CHECK(s.on_time_fraction >= 0.5);
  CHECK(s.on_time_fraction <= 0.7);
}

TEST_CASE("same config gives byte-identical data") {
  GeneratorConfig cfg;
  cfg.n_rows = 3000;
  std::ostringstream a, b;
  write_csv(a, generate(cfg).to_records());
  write_csv(b, generate(cfg).to_records());
  CHECK(a.str() == b.str());
  cfg.seed = 43;
  std::ostringstream c;
  write_csv(c, generate(cfg).to_records());
  CHECK(c.str() != a.str());
}

TEST_CASE("no effects and no noise pins otp to 100") {
  GeneratorConfig cfg;
  cfg.n_rows = 500;
  cfg.noise_sd = 0;
  cfg.effect_weights.fill(0.0);
  cfg.route_quality_bonus = 0;
  const auto d = generate(cfg);
  for (double v : d.table().column(columns::otp)) CHECK(v == 100.0);
}

TEST_CASE("route-era shift shows up in the means") {
  GeneratorConfig cfg;
  cfg.route_quality_bonus = 8.0;
  cfg.otp_base = 110.0;  // keep otp clear of the clamps
  cfg.noise_sd = 1.0;
  const auto s = summarize_calibration(generate(cfg));
  // telemetry is independent of route, so the gap is the bonus plus sampling error
  const double gap = s.mean_otp_new_routes - s.mean_otp_old_routes;
  CHECK(gap == doctest::Approx(8.0).epsilon(0.05));
  CHECK(calibration_report(generate(cfg), cfg).find("configured bonus 8.0000") != std::string::npos);
}

TEST_CASE("newer routes are better whenever the bonus beats the noise floor") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.route_quality_bonus = 2.5 * 2 * cfg.noise_sd / std::sqrt(double(cfg.n_rows)) + 0.5;
    const auto s = summarize_calibration(generate(cfg));
    CHECK(s.mean_otp_new_routes > s.mean_otp_old_routes);
  }
}

TEST_CASE("emitted rows satisfy the record invariants") {
  const auto recs = generate(GeneratorConfig{}).to_records();
  std::size_t two_quadrants = 0;
  for (const auto& r : recs) {
    CHECK(r.route_id >= 1001);
    CHECK(r.route_id <= 1090);
    CHECK(r.early_departures >= 0);
    CHECK(r.late_arrivals >= 0);
    CHECK(r.missing >= 0);
    CHECK(r.avg_dwell_time >= 0);
    REQUIRE(r.otp.has_value());
    CHECK(*r.otp >= 0);
    CHECK(*r.otp <= 100);
    const int flags = r.north + r.south + r.east + r.west;
    CHECK(flags >= 1);
    two_quadrants += flags == 2;
  }
  CHECK(two_quadrants > 0);
  CHECK(two_quadrants < recs.size() / 2);
}

TEST_CASE("calibration report lists every pair") {
  const GeneratorConfig cfg;
  const auto text = calibration_report(generate(cfg), cfg);
  std::size_t deltas = 0;
  for (auto pos = text.find("|delta|="); pos != std::string::npos; pos = text.find("|delta|=", pos + 1)) ++deltas;
  CHECK(deltas == 6);
  CHECK(text.find("bus_target = 1 fraction") != std::string::npos);
  CHECK(text.find("route <= 1044") != std::string::npos);
}

TEST_CASE("config validation") {
  GeneratorConfig cfg;
  cfg.target_correlation[0][1] = cfg.target_correlation[1][0] = 0.99;
  cfg.target_correlation[0][2] = cfg.target_correlation[2][0] = -0.99;
  CHECK(throws([&] { generate(cfg); }, ErrorKind::NotPositiveDefinite));

  GeneratorConfig asym;
  asym.target_correlation[0][1] = 0.3;
  CHECK(throws([&] { asym.validate(); }, ErrorKind::InvalidConfig));

  CHECK(throws([] { generate(GeneratorConfig{.n_rows = 1}); }, ErrorKind::InvalidConfig));
  GeneratorConfig noisy;
  noisy.noise_sd = -1;
  CHECK(throws([&] { noisy.validate(); }, ErrorKind::InvalidConfig));
}

TEST_CASE("calibration summary needs rows") {
  Dataset empty;
  for (const auto& name : {"route", "early_departure", "late_arrival", "missing", "avg_dwell_time"}) {
    empty.add_column(name, ColumnKind::numeric, {});
  }
  for (const auto& name : {"north", "south", "east", "west"}) empty.add_column(name, ColumnKind::binary, {});
  empty.add_column("otp", ColumnKind::numeric, {});
  empty.add_column("bus_target", ColumnKind::target, {});
  const FeaturizedDataset d(std::move(empty), {});
  CHECK(throws([&] { summarize_calibration(d); }, ErrorKind::SchemaMismatch));
}
