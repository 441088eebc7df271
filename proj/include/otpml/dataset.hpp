#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "otpml/matrix.hpp"

namespace otpml {

/// One route's aggregated telemetry for one day.
struct RouteDayRecord {
  std::int64_t route_id = 0;
  std::chrono::year_month_day date{};
  std::int64_t early_departures = 0;
  std::int64_t late_arrivals = 0;
  std::int64_t missing = 0;
  double avg_dwell_time = 0.0;  // seconds
  std::optional<double> otp;    // percent in [0, 100]; absent = sensor failure
  bool north = false;
  bool south = false;
  bool east = false;
  bool west = false;

  bool operator==(const RouteDayRecord&) const = default;
};

namespace columns {
inline constexpr std::string_view route = "route";
inline constexpr std::string_view early_departure = "early_departure";
inline constexpr std::string_view late_arrival = "late_arrival";
inline constexpr std::string_view missing = "missing";
inline constexpr std::string_view avg_dwell_time = "avg_dwell_time";
inline constexpr std::string_view north = "north";
inline constexpr std::string_view south = "south";
inline constexpr std::string_view east = "east";
inline constexpr std::string_view west = "west";
inline constexpr std::string_view otp = "otp";
inline constexpr std::string_view bus_target = "bus_target";
}  // namespace columns

/// Model inputs, in featurized column order.
inline constexpr std::array<std::string_view, 9> kFeatureColumns = {
    columns::route, columns::early_departure, columns::late_arrival, columns::missing, columns::avg_dwell_time,
    columns::north, columns::south,           columns::east,         columns::west};

/// The four telemetry columns compared in the pairwise-correlation table.
inline constexpr std::array<std::string_view, 4> kTelemetryColumns = {
    columns::early_departure, columns::late_arrival, columns::missing, columns::avg_dwell_time};

inline constexpr std::string_view kCsvHeader =
    "route,date,early_departure,late_arrival,missing,avg_dwell_time,otp,north,south,east,west";

/// Routes at or above this OTP percentage are labelled on-time.
inline constexpr double kOnTimeThreshold = 95.0;

inline int on_time_label(double otp) { return otp >= kOnTimeThreshold ? 1 : 0; }

enum class ColumnKind { numeric, binary, target };

struct ColumnSpec {
  std::string name;
  ColumnKind kind;
};

/// Schema-tagged column-major numeric table.
class Dataset {
 public:
  /// Appends a column. Throws DuplicateColumn, ShapeMismatch (length differs
  /// from existing columns) or BadValue (binary/target column not 0/1).
  void add_column(std::string name, ColumnKind kind, std::vector<double> values);

  std::size_t n_rows() const noexcept { return n_rows_; }
  std::size_t n_cols() const noexcept { return schema_.size(); }
  const std::vector<ColumnSpec>& schema() const noexcept { return schema_; }

  bool has_column(std::string_view name) const noexcept;
  /// Throws UnknownColumn.
  std::size_t index_of(std::string_view name) const;
  std::span<const double> column(std::string_view name) const { return columns_[index_of(name)]; }
  std::span<const double> column(std::size_t index) const { return columns_[index]; }

  /// New table holding the selected rows in the given order.
  Dataset take_rows(std::span<const std::size_t> rows) const;

 private:
  std::vector<ColumnSpec> schema_;
  std::vector<std::vector<double>> columns_;
  std::size_t n_rows_ = 0;
};

/// A Dataset carrying bus_target and a fully present otp column, plus the
/// per-row calendar dates (kept for output, never used as a feature).
class FeaturizedDataset {
 public:
  /// Checks the featurized schema and that bus_target matches the otp rule.
  /// Throws SchemaMismatch otherwise.
  FeaturizedDataset(Dataset table, std::vector<std::chrono::year_month_day> dates);

  const Dataset& table() const noexcept { return table_; }
  std::size_t n_rows() const noexcept { return table_.n_rows(); }
  std::span<const std::chrono::year_month_day> dates() const noexcept { return dates_; }

  FeaturizedDataset take_rows(std::span<const std::size_t> rows) const;

  /// Reconstructs records (for CSV output).
  std::vector<RouteDayRecord> to_records() const;

 private:
  Dataset table_;
  std::vector<std::chrono::year_month_day> dates_;
};

struct Selection {
  FeatureView x;
  std::span<const double> y;
};

/// Reads the route-day CSV format. Errors: Io, MissingHeader,
/// ColumnCountMismatch, UnparsableValue, NegativeCount, OtpOutOfRange.
std::vector<RouteDayRecord> load_csv(const std::filesystem::path& path);
std::vector<RouteDayRecord> parse_csv(std::istream& in);

void write_csv(std::ostream& out, std::span<const RouteDayRecord> records);
void write_csv(const std::filesystem::path& path, std::span<const RouteDayRecord> records);

/// Non-fatal findings (rows with no quadrant flag set).
std::vector<std::string> validation_warnings(std::span<const RouteDayRecord> records);

/// Drops rows whose otp is absent, keeping order.
std::vector<RouteDayRecord> clean(std::span<const RouteDayRecord> records);

/// Builds the model table. Throws EmptyInput, or SchemaMismatch if any otp
/// is absent.
FeaturizedDataset featurize(std::span<const RouteDayRecord> records);

/// Feature view in `names` order plus the target column, both over the
/// table's storage. Throws EmptyInput, DuplicateColumn, UnknownColumn.
Selection select_columns(const Dataset& d, std::span<const std::string> names, std::string_view target);

/// The nine model features minus any listed in `exclude`.
std::vector<std::string> feature_names(std::span<const std::string_view> exclude = {});

/// Converts a 0/1 target column to labels. Throws LabelOutOfRange.
std::vector<int> to_labels(std::span<const double> target);

std::string format_date(const std::chrono::year_month_day& date);

}  // namespace otpml
