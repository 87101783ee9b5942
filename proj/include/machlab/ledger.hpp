#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace machlab {

/// Per-run table of monitored norms, one row per accepted step.
///
/// The first column is always the time "t", strictly increasing.  Columns
/// named "int_*" are running time integrals and must be nondecreasing.
class RunLedger {
 public:
  RunLedger() = default;
  explicit RunLedger(std::vector<std::string> columns);

  std::string run_id;
  std::string config_hash;
  /// Free-form key/value pairs written as header comments.
  std::vector<std::pair<std::string, std::string>> metadata;

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  size_t rows() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  /// Appends one row; throws std::invalid_argument on a width mismatch, a
  /// non-increasing time or a decreasing accumulator.
  void append(std::span<const double> row);
  const std::vector<double>& row(size_t i) const { return data_.at(i); }

  bool has_column(std::string_view name) const;
  /// Throws std::out_of_range naming the missing column.
  std::vector<double> column(std::string_view name) const;
  double last(std::string_view name) const;

  /// "# machlab-ledger v1" header, metadata comments, column line, then rows
  /// printed with %.17g.
  void write_csv(std::ostream& out) const;
  static RunLedger read_csv(std::istream& in);

 private:
  size_t index_of(std::string_view name) const;
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> data_;
};

/// Running trapezoid integral of a sampled quantity.
class Accumulator {
 public:
  /// Adds the sample (t, value) and returns the integral from the first sample.
  double add(double t, double value);
  double value() const noexcept { return total_; }

 private:
  bool started_ = false;
  double last_t_ = 0.0;
  double last_v_ = 0.0;
  double total_ = 0.0;
};

/// 64-bit FNV-1a of the text, as 16 hex digits.
std::string text_hash(std::string_view text);

/// %.17g formatting shared by every CSV writer.
std::string format_double(double x);

}  // namespace machlab
