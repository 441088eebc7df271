#include "otpml/synth.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <fmt/format.h>

#include "otpml/error.hpp"
#include "otpml/rng.hpp"
#include "otpml/stats.hpp"

namespace otpml {

namespace {

Eigen::Matrix4d cholesky_factor(const std::array<std::array<double, 4>, 4>& corr) {
  Eigen::Matrix4d m;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) m(i, j) = corr[i][j];
  }
  Eigen::LLT<Eigen::Matrix4d> llt(m);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::NotPositiveDefinite, "target correlation");
  // LLT succeeds on some semidefinite inputs; require a strictly positive diagonal.
  const Eigen::Matrix4d l = llt.matrixL();
  for (int i = 0; i < 4; ++i) {
    if (!(l(i, i) > 1e-12)) throw Error(ErrorKind::NotPositiveDefinite, "target correlation");
  }
  return l;
}

double count_from_latent(const CountMarginal& m, double z) { return std::floor(m.scale * std::exp(m.spread * z)); }

// Divide by the scale so the result is the double nearest the decimal value.
double round_to(double v, double scale) { return std::round(v * scale) / scale; }

}  // namespace

void GeneratorConfig::validate() const {
  if (n_rows < 2) throw Error(ErrorKind::InvalidConfig, "n_rows must be at least 2");
  if (route_min <= 0 || route_max < route_min) throw Error(ErrorKind::InvalidConfig, "route range is empty");
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) throw Error(ErrorKind::InvalidConfig, "noise_sd must be >= 0");
  for (int i = 0; i < 4; ++i) {
    if (target_correlation[i][i] != 1.0) throw Error(ErrorKind::InvalidConfig, "correlation diagonal must be 1");
    for (int j = 0; j < 4; ++j) {
      const double r = target_correlation[i][j];
      if (r != target_correlation[j][i]) throw Error(ErrorKind::InvalidConfig, "correlation must be symmetric");
      if (!(std::abs(r) <= 1.0)) throw Error(ErrorKind::InvalidConfig, "correlation entries must lie in [-1, 1]");
    }
  }
  for (const auto* m : {&early_departure, &late_arrival, &missing}) {
    if (!(m->scale > 0.0) || !(m->spread >= 0.0)) throw Error(ErrorKind::InvalidConfig, "bad count marginal");
  }
  if (!(dwell_sd >= 0.0)) throw Error(ErrorKind::InvalidConfig, "dwell_sd must be >= 0");
  for (double w : effect_weights) {
    if (!std::isfinite(w)) throw Error(ErrorKind::InvalidConfig, "effect weights must be finite");
  }
  if (!std::isfinite(otp_base) || !std::isfinite(route_quality_bonus)) {
    throw Error(ErrorKind::InvalidConfig, "otp_base and route_quality_bonus must be finite");
  }
  if (!start_date.ok()) throw Error(ErrorKind::InvalidConfig, "start_date is not a valid date");
  cholesky_factor(target_correlation);
}

std::array<bool, 4> route_quadrants(std::int64_t route_id) {
  const std::uint64_t h = splitmix64(static_cast<std::uint64_t>(route_id));
  std::array<bool, 4> q{};
  const std::size_t primary = h % 4;
  q[primary] = true;
  // roughly a quarter of the routes cross into a neighbouring section
  if ((h >> 8) % 4 == 0) q[(primary + 1 + (h >> 16) % 3) % 4] = true;
  return q;
}

FeaturizedDataset generate(const GeneratorConfig& cfg) {
  cfg.validate();
  const Eigen::Matrix4d chol = cholesky_factor(cfg.target_correlation);
  const auto n_routes = static_cast<std::size_t>(cfg.route_max - cfg.route_min + 1);

  Rng rng(cfg.seed);
  std::vector<RouteDayRecord> records(cfg.n_rows);
  const std::chrono::sys_days day0{cfg.start_date};
  for (std::size_t i = 0; i < cfg.n_rows; ++i) {
    RouteDayRecord& r = records[i];
    r.route_id = cfg.route_min + static_cast<std::int64_t>(i % n_routes);
    r.date = std::chrono::year_month_day{day0 + std::chrono::days{static_cast<long>(i / n_routes)}};

    Eigen::Vector4d u;
    for (int k = 0; k < 4; ++k) u[k] = rng.normal();
    const Eigen::Vector4d z = chol * u;

    r.early_departures = static_cast<std::int64_t>(count_from_latent(cfg.early_departure, z[0]));
    r.late_arrivals = static_cast<std::int64_t>(count_from_latent(cfg.late_arrival, z[1]));
    r.missing = static_cast<std::int64_t>(count_from_latent(cfg.missing, z[2]));
    r.avg_dwell_time = std::max(0.0, round_to(cfg.dwell_mean + cfg.dwell_sd * z[3], 10.0));

    const auto q = route_quadrants(r.route_id);
    r.north = q[0];
    r.south = q[1];
    r.east = q[2];
    r.west = q[3];

    const std::array<double, 8> features = {
        static_cast<double>(r.early_departures), static_cast<double>(r.late_arrivals),
        static_cast<double>(r.missing),          r.avg_dwell_time,
        double(r.north),                         double(r.south),
        double(r.east),                          double(r.west)};
    double otp = cfg.otp_base;
    for (std::size_t k = 0; k < features.size(); ++k) otp -= cfg.effect_weights[k] * features[k];
    if (r.route_id > kNewRouteThreshold) otp += cfg.route_quality_bonus;
    otp += cfg.noise_sd * rng.normal();
    r.otp = std::clamp(round_to(otp, 100.0), 0.0, 100.0);
  }
  return featurize(records);
}

CalibrationSummary summarize_calibration(const FeaturizedDataset& d) {
  if (d.n_rows() < 2) throw Error(ErrorKind::SchemaMismatch, "calibration needs a non-empty featurized dataset");
  CalibrationSummary s;
  const std::vector<std::string> names(kTelemetryColumns.begin(), kTelemetryColumns.end());
  const auto corr = corr_matrix(d.table(), names);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) s.empirical_correlation[i][j] = corr.values[i][j];
  }
  const auto route = d.table().column(columns::route);
  const auto otp = d.table().column(columns::otp);
  const auto target = d.table().column(columns::bus_target);
  double old_sum = 0.0, new_sum = 0.0, positives = 0.0;
  for (std::size_t i = 0; i < d.n_rows(); ++i) {
    positives += target[i];
    if (route[i] > static_cast<double>(kNewRouteThreshold)) {
      new_sum += otp[i];
      ++s.n_new;
    } else {
      old_sum += otp[i];
      ++s.n_old;
    }
  }
  s.on_time_fraction = positives / static_cast<double>(d.n_rows());
  s.mean_otp_old_routes = s.n_old ? old_sum / static_cast<double>(s.n_old) : std::nan("");
  s.mean_otp_new_routes = s.n_new ? new_sum / static_cast<double>(s.n_new) : std::nan("");
  return s;
}

std::string calibration_report(const FeaturizedDataset& d, const GeneratorConfig& cfg) {
  const CalibrationSummary s = summarize_calibration(d);
  std::string out = fmt::format("rows: {}\nseed: {}\n\n", d.n_rows(), cfg.seed);
  out += "pairwise correlation (empirical vs target)\n";
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const double target = cfg.target_correlation[i][j];
      const double got = s.empirical_correlation[i][j];
      worst = std::max(worst, std::abs(got - target));
      out += fmt::format("  {:<16} {:<16} empirical={:+.4f} target={:+.4f} |delta|={:.4f}\n", kTelemetryColumns[i],
                         kTelemetryColumns[j], got, target, std::abs(got - target));
    }
  }
  out += fmt::format("  max |delta| = {:.4f}\n\n", worst);
  out += fmt::format("bus_target = 1 fraction: {:.4f}\n\n", s.on_time_fraction);
  out += fmt::format("mean otp, route <= {}: {:.4f} (n={})\n", kNewRouteThreshold, s.mean_otp_old_routes, s.n_old);
  out += fmt::format("mean otp, route >  {}: {:.4f} (n={})\n", kNewRouteThreshold, s.mean_otp_new_routes, s.n_new);
  out += fmt::format("difference (new - old): {:+.4f} (configured bonus {:.4f})\n",
                     s.mean_otp_new_routes - s.mean_otp_old_routes, cfg.route_quality_bonus);
  return out;
}

}  // namespace otpml
