#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace gpcsg {

/// Shortest round-trip-safe text for a double: 17 significant digits,
/// '.' decimal separator regardless of locale.
std::string format_double(double value);

/// Column-labelled table of preformatted cells; the canonical output of
/// every study. CSV is RFC-4180 style with a header row.
class Table {
 public:
  Table() = default;
  explicit Table(std::vector<std::string> header);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::size_t row_count() const { return rows_.size(); }

  void add_row(std::vector<std::string> cells);
  void add_row(const std::vector<double>& values);

  /// Column index by name; throws if missing.
  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::string_view name) const;
  std::vector<double> numbers(std::string_view name) const;

  void write_csv(std::ostream& out) const;
  std::string to_csv() const;

  static Table parse_csv(std::string_view text);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace gpcsg
