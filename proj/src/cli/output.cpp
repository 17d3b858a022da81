#include "rabicd/cli/output.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rabicd::cli {

void Table::add(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw std::logic_error("table '" + name + "': row has " + std::to_string(row.size()) + " cells, expected " +
                               std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
}

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out + "\"";
}

std::string csv_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_real(*d);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    return csv_escape(std::get<std::string>(c));
}

// Non-finite values become null in JSON.
std::string json_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? format_real(*d) : "null";
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    return json_string(std::get<std::string>(c));
}

}  // namespace

void write_csv(const Report& r, std::ostream& out) {
    out << "# artifact: rabicd " << kArtifactVersion << "\n";
    out << "# command: " << r.command << "\n";
    out << "# config_digest: fnv1a64:" << r.config.digest() << "\n";
    for (const auto& [k, v] : r.config.values()) out << "# config: " << k << " = " << v << "\n";
    for (const auto& [k, v] : r.meta) out << "# meta: " << k << " = " << v << "\n";
    for (const auto& t : r.tables) {
        out << "# table: " << t.name << "\n";
        for (std::size_t j = 0; j < t.columns.size(); ++j) out << (j ? "," : "") << t.columns[j];
        out << "\n";
        for (const auto& row : t.rows) {
            for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << csv_cell(row[j]);
            out << "\n";
        }
    }
}

void write_json(const Report& r, std::ostream& out) {
    out << "{\n  \"artifact\": \"rabicd\",\n  \"version\": " << json_string(kArtifactVersion) << ",\n";
    out << "  \"command\": " << json_string(r.command) << ",\n";
    out << "  \"config_digest\": \"fnv1a64:" << r.config.digest() << "\",\n";
    out << "  \"config\": {";
    bool first = true;
    for (const auto& [k, v] : r.config.values()) {
        out << (first ? "\n" : ",\n") << "    " << json_string(k) << ": " << json_string(v);
        first = false;
    }
    out << "\n  },\n  \"meta\": {";
    first = true;
    for (const auto& [k, v] : r.meta) {
        out << (first ? "\n" : ",\n") << "    " << json_string(k) << ": " << json_string(v);
        first = false;
    }
    out << (r.meta.empty() ? "" : "\n  ") << "},\n  \"tables\": {";
    for (std::size_t ti = 0; ti < r.tables.size(); ++ti) {
        const Table& t = r.tables[ti];
        out << (ti ? ",\n" : "\n") << "    " << json_string(t.name) << ": {\n      \"columns\": [";
        for (std::size_t j = 0; j < t.columns.size(); ++j) out << (j ? ", " : "") << json_string(t.columns[j]);
        out << "],\n      \"rows\": [";
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            out << (i ? ",\n        [" : "\n        [");
            for (std::size_t j = 0; j < t.rows[i].size(); ++j) out << (j ? ", " : "") << json_cell(t.rows[i][j]);
            out << "]";
        }
        out << (t.rows.empty() ? "]" : "\n      ]") << "\n    }";
    }
    out << (r.tables.empty() ? "}" : "\n  }") << "\n}\n";
}

void write_report(const Report& r, std::ostream& out) {
    if (r.config.raw("format") == "json") {
        write_json(r, out);
    } else {
        write_csv(r, out);
    }
}

}  // namespace rabicd::cli
