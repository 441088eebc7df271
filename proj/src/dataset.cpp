#include "otpml/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "otpml/error.hpp"

namespace otpml {

namespace {

constexpr std::size_t kCsvFields = 11;

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

[[noreturn]] void unparsable(std::size_t line, std::string_view column, std::string_view text) {
  throw Error(ErrorKind::UnparsableValue,
              "line " + std::to_string(line) + ", column " + std::string(column) + ": '" + std::string(text) + "'");
}

std::int64_t parse_int(std::string_view text, std::size_t line, std::string_view column) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) unparsable(line, column, text);
  return value;
}

double parse_real(std::string_view text, std::size_t line, std::string_view column) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || !std::isfinite(value)) {
    unparsable(line, column, text);
  }
  return value;
}

std::int64_t parse_count(std::string_view text, std::size_t line, std::string_view column) {
  const std::int64_t v = parse_int(text, line, column);
  if (v < 0) {
    throw Error(ErrorKind::NegativeCount, "line " + std::to_string(line) + ", column " + std::string(column));
  }
  return v;
}

bool parse_flag(std::string_view text, std::size_t line, std::string_view column) {
  if (text == "0") return false;
  if (text == "1") return true;
  unparsable(line, column, text);
}

std::chrono::year_month_day parse_date(std::string_view text, std::size_t line) {
  // YYYY-MM-DD
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') unparsable(line, "date", text);
  const auto digits = [&](std::string_view part) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size()) unparsable(line, "date", text);
    return v;
  };
  const std::chrono::year_month_day date{std::chrono::year{digits(text.substr(0, 4))},
                                         std::chrono::month{static_cast<unsigned>(digits(text.substr(5, 2)))},
                                         std::chrono::day{static_cast<unsigned>(digits(text.substr(8, 2)))}};
  if (!date.ok()) unparsable(line, "date", text);
  return date;
}

std::string format_real(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

RouteDayRecord parse_record(std::string_view text, std::size_t line) {
  const auto fields = split_fields(text);
  if (fields.size() != kCsvFields) {
    throw Error(ErrorKind::ColumnCountMismatch, "line " + std::to_string(line) + ": expected " +
                                                    std::to_string(kCsvFields) + " fields, found " +
                                                    std::to_string(fields.size()));
  }
  RouteDayRecord r;
  r.route_id = parse_int(fields[0], line, columns::route);
  if (r.route_id <= 0) unparsable(line, columns::route, fields[0]);
  r.date = parse_date(fields[1], line);
  r.early_departures = parse_count(fields[2], line, columns::early_departure);
  r.late_arrivals = parse_count(fields[3], line, columns::late_arrival);
  r.missing = parse_count(fields[4], line, columns::missing);
  r.avg_dwell_time = parse_real(fields[5], line, columns::avg_dwell_time);
  if (r.avg_dwell_time < 0.0) {
    throw Error(ErrorKind::NegativeCount, "line " + std::to_string(line) + ", column avg_dwell_time");
  }
  if (fields[6] != "NULL") {
    const double otp = parse_real(fields[6], line, columns::otp);
    if (otp < 0.0 || otp > 100.0) {
      throw Error(ErrorKind::OtpOutOfRange, "line " + std::to_string(line) + ": otp " + std::string(fields[6]));
    }
    r.otp = otp;
  }
  r.north = parse_flag(fields[7], line, columns::north);
  r.south = parse_flag(fields[8], line, columns::south);
  r.east = parse_flag(fields[9], line, columns::east);
  r.west = parse_flag(fields[10], line, columns::west);
  return r;
}

}  // namespace

std::string format_date(const std::chrono::year_month_day& date) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

// Dataset ------------------------------------------------------------------

void Dataset::add_column(std::string name, ColumnKind kind, std::vector<double> values) {
  if (has_column(name)) throw Error(ErrorKind::DuplicateColumn, name);
  if (!schema_.empty() && values.size() != n_rows_) {
    throw Error(ErrorKind::ShapeMismatch, "column " + name + " has " + std::to_string(values.size()) +
                                              " rows, table has " + std::to_string(n_rows_));
  }
  if (kind != ColumnKind::numeric) {
    for (double v : values) {
      if (v != 0.0 && v != 1.0) throw Error(ErrorKind::BadValue, "column " + name + " must be 0/1");
    }
  }
  n_rows_ = values.size();
  schema_.push_back({std::move(name), kind});
  columns_.push_back(std::move(values));
}

bool Dataset::has_column(std::string_view name) const noexcept {
  return std::any_of(schema_.begin(), schema_.end(), [&](const ColumnSpec& c) { return c.name == name; });
}

std::size_t Dataset::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < schema_.size(); ++i) {
    if (schema_[i].name == name) return i;
  }
  throw Error(ErrorKind::UnknownColumn, std::string(name));
}

Dataset Dataset::take_rows(std::span<const std::size_t> rows) const {
  Dataset out;
  for (std::size_t c = 0; c < schema_.size(); ++c) {
    out.add_column(schema_[c].name, schema_[c].kind, gather(std::span<const double>(columns_[c]), rows));
  }
  if (schema_.empty()) out.n_rows_ = 0;
  return out;
}

// FeaturizedDataset ----------------------------------------------------------

FeaturizedDataset::FeaturizedDataset(Dataset table, std::vector<std::chrono::year_month_day> dates)
    : table_(std::move(table)), dates_(std::move(dates)) {
  for (auto name : kFeatureColumns) {
    if (!table_.has_column(name)) throw Error(ErrorKind::SchemaMismatch, "missing column " + std::string(name));
  }
  if (!table_.has_column(columns::otp) || !table_.has_column(columns::bus_target)) {
    throw Error(ErrorKind::SchemaMismatch, "missing otp or bus_target");
  }
  if (dates_.size() != table_.n_rows()) {
    throw Error(ErrorKind::SchemaMismatch, "date count does not match row count");
  }
  auto otp = table_.column(columns::otp);
  auto target = table_.column(columns::bus_target);
  for (std::size_t i = 0; i < otp.size(); ++i) {
    if (!std::isfinite(otp[i]) || static_cast<double>(on_time_label(otp[i])) != target[i]) {
      throw Error(ErrorKind::SchemaMismatch, "bus_target inconsistent with otp at row " + std::to_string(i));
    }
  }
}

FeaturizedDataset FeaturizedDataset::take_rows(std::span<const std::size_t> rows) const {
  return FeaturizedDataset(table_.take_rows(rows), gather(std::span<const std::chrono::year_month_day>(dates_), rows));
}

std::vector<RouteDayRecord> FeaturizedDataset::to_records() const {
  std::vector<RouteDayRecord> out(n_rows());
  auto col = [&](std::string_view n) { return table_.column(n); };
  auto route = col(columns::route), early = col(columns::early_departure), late = col(columns::late_arrival),
       missing = col(columns::missing), dwell = col(columns::avg_dwell_time), otp = col(columns::otp),
       north = col(columns::north), south = col(columns::south), east = col(columns::east), west = col(columns::west);
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& r = out[i];
    r.route_id = static_cast<std::int64_t>(route[i]);
    r.date = dates_[i];
    r.early_departures = static_cast<std::int64_t>(early[i]);
    r.late_arrivals = static_cast<std::int64_t>(late[i]);
    r.missing = static_cast<std::int64_t>(missing[i]);
    r.avg_dwell_time = dwell[i];
    r.otp = otp[i];
    r.north = north[i] != 0.0;
    r.south = south[i] != 0.0;
    r.east = east[i] != 0.0;
    r.west = west[i] != 0.0;
  }
  return out;
}

// CSV ---------------------------------------------------------------------

std::vector<RouteDayRecord> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::MissingHeader, "empty input");
  if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw Error(ErrorKind::MissingHeader, "first line is '" + line + "'");

  std::vector<RouteDayRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    records.push_back(parse_record(line, line_no));
  }
  return records;
}

std::vector<RouteDayRecord> load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return parse_csv(in);
}

void write_csv(std::ostream& out, std::span<const RouteDayRecord> records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.route_id << ',' << format_date(r.date) << ',' << r.early_departures << ',' << r.late_arrivals << ','
        << r.missing << ',' << format_real(r.avg_dwell_time) << ',' << (r.otp ? format_real(*r.otp) : "NULL") << ','
        << int(r.north) << ',' << int(r.south) << ',' << int(r.east) << ',' << int(r.west) << '\n';
  }
}

void write_csv(const std::filesystem::path& path, std::span<const RouteDayRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  write_csv(out, records);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::vector<std::string> validation_warnings(std::span<const RouteDayRecord> records) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (!r.north && !r.south && !r.east && !r.west) {
      out.push_back("record " + std::to_string(i) + " (route " + std::to_string(r.route_id) +
                    ") has no quadrant flag set");
    }
  }
  return out;
}

// Preparation --------------------------------------------------------------

std::vector<RouteDayRecord> clean(std::span<const RouteDayRecord> records) {
  std::vector<RouteDayRecord> out;
  out.reserve(records.size());
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [](const RouteDayRecord& r) { return r.otp.has_value(); });
  return out;
}

FeaturizedDataset featurize(std::span<const RouteDayRecord> records) {
  if (records.empty()) throw Error(ErrorKind::EmptyInput, "no records to featurize");
  const std::size_t n = records.size();
  std::vector<double> route(n), early(n), late(n), missing(n), dwell(n), north(n), south(n), east(n), west(n),
      otp(n), target(n);
  std::vector<std::chrono::year_month_day> dates(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = records[i];
    if (!r.otp) throw Error(ErrorKind::SchemaMismatch, "record " + std::to_string(i) + " has absent otp");
    route[i] = static_cast<double>(r.route_id);
    early[i] = static_cast<double>(r.early_departures);
    late[i] = static_cast<double>(r.late_arrivals);
    missing[i] = static_cast<double>(r.missing);
    dwell[i] = r.avg_dwell_time;
    north[i] = r.north;
    south[i] = r.south;
    east[i] = r.east;
    west[i] = r.west;
    otp[i] = *r.otp;
    target[i] = on_time_label(*r.otp);
    dates[i] = r.date;
  }
  Dataset d;
  d.add_column(std::string(columns::route), ColumnKind::numeric, std::move(route));
  d.add_column(std::string(columns::early_departure), ColumnKind::numeric, std::move(early));
  d.add_column(std::string(columns::late_arrival), ColumnKind::numeric, std::move(late));
  d.add_column(std::string(columns::missing), ColumnKind::numeric, std::move(missing));
  d.add_column(std::string(columns::avg_dwell_time), ColumnKind::numeric, std::move(dwell));
  d.add_column(std::string(columns::north), ColumnKind::binary, std::move(north));
  d.add_column(std::string(columns::south), ColumnKind::binary, std::move(south));
  d.add_column(std::string(columns::east), ColumnKind::binary, std::move(east));
  d.add_column(std::string(columns::west), ColumnKind::binary, std::move(west));
  d.add_column(std::string(columns::otp), ColumnKind::numeric, std::move(otp));
  d.add_column(std::string(columns::bus_target), ColumnKind::target, std::move(target));
  return FeaturizedDataset(std::move(d), std::move(dates));
}

Selection select_columns(const Dataset& d, std::span<const std::string> names, std::string_view target) {
  if (names.empty()) throw Error(ErrorKind::EmptyInput, "no feature columns selected");
  std::vector<std::span<const double>> cols;
  cols.reserve(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (names[j] == names[i]) throw Error(ErrorKind::DuplicateColumn, names[i]);
    }
    if (names[i] == target) throw Error(ErrorKind::DuplicateColumn, "target " + names[i] + " listed as a feature");
    cols.push_back(d.column(names[i]));
  }
  return Selection{FeatureView(std::move(cols), d.n_rows()), d.column(target)};
}

std::vector<std::string> feature_names(std::span<const std::string_view> exclude) {
  std::vector<std::string> out;
  for (auto name : kFeatureColumns) {
    if (std::find(exclude.begin(), exclude.end(), name) == exclude.end()) out.emplace_back(name);
  }
  return out;
}

std::vector<int> to_labels(std::span<const double> target) {
  std::vector<int> out(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target[i] == 0.0) {
      out[i] = 0;
    } else if (target[i] == 1.0) {
      out[i] = 1;
    } else {
      throw Error(ErrorKind::LabelOutOfRange, "target value at row " + std::to_string(i) + " is not 0/1");
    }
  }
  return out;
}

}  // namespace otpml
