// Tabular output shared by all subcommands: RFC-4180 CSV and JSON with
// numbers rounded to 12 significant digits.

#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace nlshare::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "nlshare";
inline constexpr const char* kToolVersion = "1.0.0";

/// printf "%.12g"; non-finite values print as "nan", "inf", "-inf".
std::string format_number(double x);

/// x rounded to 12 significant digits. Non-finite values pass through.
double round12(double x);

/// Number node holding round12(x), or null when x is not finite.
Json json_number(double x);

/// Quotes when the field has a comma, quote, CR or LF; doubles inner quotes.
std::string csv_field(std::string_view s);

using Cell = std::variant<std::monostate, bool, long long, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws std::logic_error if the row width differs from columns.
  void add_row(std::vector<Cell> row);
};

/// Header line plus one line per row, CRLF terminated. Empty cells for null.
std::string to_csv(const Table& table);

/// Array of objects keyed by column name, in column order.
Json to_json_rows(const Table& table);

Json to_json(const Cell& cell);

/// {"tool", "version", "timestamp", "tolerance"}; timestamp null unless given.
Json metadata(bool with_timestamp, double tolerance);

}  // namespace nlshare::cli
