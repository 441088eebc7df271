#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <string>

#include "otpml/dataset.hpp"

namespace otpml {

/// Routes numbered above this are the newer network lines.
inline constexpr std::int64_t kNewRouteThreshold = 1044;

/// Count marginal: floor(scale * exp(spread * z)) for latent z ~ N(0, 1).
struct CountMarginal {
  double scale;
  double spread;
};

/// Settings for the calibrated synthetic route-day generator.
///
/// Telemetry columns come from a latent Gaussian with the given correlation,
/// mapped monotonically onto count / duration scales. OTP is
///   clamp(otp_base - sum(effect * feature) + bonus * [route > 1044] + noise, 0, 100).
struct GeneratorConfig {
  std::size_t n_rows = 10000;
  std::int64_t route_min = 1001;
  std::int64_t route_max = 1090;

  /// Over (early_departure, late_arrival, missing, avg_dwell_time).
  std::array<std::array<double, 4>, 4> target_correlation = {{
      {1.00, 0.27, 0.19, -0.07},
      {0.27, 1.00, 0.41, -0.13},
      {0.19, 0.41, 1.00, -0.02},
      {-0.07, -0.13, -0.02, 1.00},
  }};

  CountMarginal early_departure{8.0, 0.35};
  CountMarginal late_arrival{18.0, 0.35};
  CountMarginal missing{5.0, 0.40};
  double dwell_mean = 40.0;
  double dwell_sd = 8.0;

  /// OTP points lost per unit of each feature, in kFeatureColumns order
  /// without route (early, late, missing, dwell, north, south, east, west).
  std::array<double, 8> effect_weights = {0.70, 0.55, 1.00, 0.20, 0.0, 0.0, 0.0, 0.0};
  double route_quality_bonus = 7.0;
  double otp_base = 121.0;
  double noise_sd = 1.7;

  std::uint64_t seed = 42;
  std::chrono::year_month_day start_date{std::chrono::year{2020}, std::chrono::month{3}, std::chrono::day{20}};

  /// Throws InvalidConfig or NotPositiveDefinite.
  void validate() const;
};

/// Deterministic for a fixed config.
FeaturizedDataset generate(const GeneratorConfig& cfg);

/// Quadrant flags (north, south, east, west) assigned to a route number.
std::array<bool, 4> route_quadrants(std::int64_t route_id);

struct CalibrationSummary {
  std::array<std::array<double, 4>, 4> empirical_correlation{};
  double on_time_fraction = 0.0;
  double mean_otp_old_routes = 0.0;  // route <= 1044
  double mean_otp_new_routes = 0.0;  // route > 1044
  std::size_t n_old = 0;
  std::size_t n_new = 0;
};

/// Throws SchemaMismatch on datasets with fewer than two rows.
CalibrationSummary summarize_calibration(const FeaturizedDataset& d);

/// Text diagnostics comparing the dataset against the generator targets.
std::string calibration_report(const FeaturizedDataset& d, const GeneratorConfig& cfg);

}  // namespace otpml
