#include "lpglm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lpglm/errors.hpp"

namespace lpglm {

namespace {

std::string trim(std::string s) {
    const auto notspace = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    return s;
}

std::vector<std::string> split_fields(const std::string& line, std::size_t lineno) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw ParseError("unterminated quoted field", lineno);
    out.push_back(trim(cur));
    return out;
}

void dump_value(const ordered_json& j, std::string& out, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type()) {
        case ordered_json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad;
                out += ordered_json(it.key()).dump();
                out += ": ";
                dump_value(it.value(), out, depth + 1);
            }
            out += "\n" + close + "}";
            return;
        }
        case ordered_json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            const bool scalars = std::all_of(j.begin(), j.end(), [](const ordered_json& e) { return e.is_primitive(); });
            if (scalars) {
                out += "[";
                bool first = true;
                for (const auto& e : j) {
                    if (!first) out += ", ";
                    first = false;
                    dump_value(e, out, depth + 1);
                }
                out += "]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& e : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad;
                dump_value(e, out, depth + 1);
            }
            out += "\n" + close + "]";
            return;
        }
        case ordered_json::value_t::number_float: {
            const double v = j.get<double>();
            out += std::isfinite(v) ? format_double(v) : "null";
            return;
        }
        default: out += j.dump(); return;
    }
}

}  // namespace

CsvTable CsvTable::parse(const std::string& text) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (trim(line).empty()) continue;
        auto fields = split_fields(line, lineno);
        if (!have_header) {
            t.header_ = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != t.header_.size()) {
            throw ParseError("expected " + std::to_string(t.header_.size()) + " fields, found " +
                                 std::to_string(fields.size()),
                             lineno);
        }
        t.cells_.push_back(std::move(fields));
        t.line_of_row_.push_back(lineno);
    }
    if (!have_header) throw ParseError("missing header row", lineno);
    return t;
}

CsvTable CsvTable::read(const std::string& path) { return parse(read_text_file(path)); }

bool CsvTable::has_column(const std::string& name) const {
    return std::find(header_.begin(), header_.end(), name) != header_.end();
}

std::vector<double> CsvTable::numeric_column(const std::string& name) const {
    const auto it = std::find(header_.begin(), header_.end(), name);
    if (it == header_.end()) throw ConfigError("CSV has no column named '" + name + "'");
    const auto idx = static_cast<std::size_t>(it - header_.begin());
    std::vector<double> out;
    out.reserve(cells_.size());
    for (std::size_t r = 0; r < cells_.size(); ++r) {
        const std::string& cell = cells_[r][idx];
        double v = 0.0;
        const char* first = cell.data();
        const char* last = first + cell.size();
        if (!cell.empty() && *first == '+') ++first;
        const auto res = std::from_chars(first, last, v);
        if (cell.empty() || res.ec != std::errc() || res.ptr != last)
            throw ParseError("column '" + name + "': cannot parse '" + cell + "' as a number", line_of_row_[r]);
        out.push_back(v);
    }
    return out;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size()) throw ConfigError("write_csv: header/column count mismatch");
    std::string out;
    for (std::size_t c = 0; c < header.size(); ++c) out += (c ? "," : "") + header[c];
    out += "\n";
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out += ",";
            out += format_double(columns[c].at(r));
        }
        out += "\n";
    }
    write_text_file(path, out);
}

std::string dump_json(const ordered_json& j) {
    std::string out;
    dump_value(j, out, 0);
    out += "\n";
    return out;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw ConfigError("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace lpglm
