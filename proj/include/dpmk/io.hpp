#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace dpmk {

/// Shortest round-trip decimal form, independent of the locale; inf and nan
/// print as "inf", "-inf", "nan".
std::string format_double(double v);

/// Write through a temporary file in the same directory, then rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Comma-separated table with a header row.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  template <class... Ts>
  void add_row(const Ts&... values) {
    std::vector<std::string> fields;
    fields.reserve(sizeof...(Ts));
    (fields.push_back(field(values)), ...);
    push(std::move(fields));
  }

  std::string str() const;
  void write(const std::filesystem::path& path) const { write_file_atomic(path, str()); }
  std::size_t size() const { return rows_.size(); }

 private:
  static std::string field(std::string_view v);
  static std::string field(const std::string& v) { return field(std::string_view(v)); }
  static std::string field(const char* v) { return field(std::string_view(v)); }
  static std::string field(double v) { return format_double(v); }
  template <class T>
    requires std::is_integral_v<T>
  static std::string field(T v) {
    return std::to_string(v);
  }
  void push(std::vector<std::string> fields);

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// One real per line; blank lines are skipped. Throws ConfigError naming
/// the first bad line.
std::vector<double> read_data_file(const std::filesystem::path& path);

std::string format_data(const std::vector<double>& x);

}  // namespace dpmk
