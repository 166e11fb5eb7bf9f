#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace lpglm {

using ordered_json = nlohmann::ordered_json;

/// Header row plus string cells; numeric conversion happens per column so that
/// unused non-numeric columns (dates, labels) do not break loading.
class CsvTable {
  public:
    static CsvTable parse(const std::string& text);
    static CsvTable read(const std::string& path);

    const std::vector<std::string>& header() const { return header_; }
    std::size_t rows() const { return cells_.size(); }
    bool has_column(const std::string& name) const;
    /// ParseError naming the line of the first malformed number; ConfigError for a missing column.
    std::vector<double> numeric_column(const std::string& name) const;

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> cells_;
    std::vector<std::size_t> line_of_row_;
};

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

/// Locale-independent shortest-free formatting: 17 significant digits.
std::string format_double(double v);

/// Serialises with keys in insertion order, 2-space indent, doubles at 17 significant digits,
/// non-finite numbers as null.
std::string dump_json(const ordered_json& j);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace lpglm
