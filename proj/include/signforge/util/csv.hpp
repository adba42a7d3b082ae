#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace signforge::util {

/// In-memory CSV: a header row plus data rows, all cells as text.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_string(char delim = ',') const;
  /// Column index by name; throws DataError if absent.
  std::size_t column(const std::string& name) const;
};

/// Parses delimited text. Rows must match the header width; a ragged or
/// empty-field-count row raises DataError naming the 1-based row number.
CsvTable parse_csv(const std::string& text, char delim = ',');

CsvTable read_csv(const std::filesystem::path& path, char delim = ',');
void write_csv(const std::filesystem::path& path, const CsvTable& table, char delim = ',');

/// Deterministic fixed-point rendering used for all emitted numbers.
std::string format_double(double v, int decimals = 6);

/// Parses a double; throws DataError with context on failure.
double parse_double(const std::string& s, const std::string& context);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace signforge::util
