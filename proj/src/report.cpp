#include "hardylab/report.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace hardylab::report {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";  // fold the sign of -0.0 away
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string cell_text(const Cell& c) {
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    return std::to_string(std::get<long long>(c));
}

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size())
        throw std::logic_error("report row width " + std::to_string(row.size()) +
                               " != column count " + std::to_string(columns.size()));
    rows.push_back(std::move(row));
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

}  // namespace

std::string to_csv(const Table& table, const ConfigEcho& config) {
    std::string out;
    for (const auto& [key, value] : config) out += "# " + key + "=" + value + "\n";
    for (size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(table.columns[i]);
    }
    if (!table.columns.empty()) out += ',';
    out += "schema_version\n";
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_escape(cell_text(row[i]));
        }
        if (!row.empty()) out += ',';
        out += std::to_string(kSchemaVersion) + "\n";
    }
    return out;
}

std::string to_json(const Table& table, const ConfigEcho& config,
                    const std::string& verdict) {
    nlohmann::ordered_json root;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [key, value] : config) cfg[key] = value;
    root["config"] = std::move(cfg);
    root["schema_version"] = kSchemaVersion;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (size_t i = 0; i < row.size(); ++i) {
            const Cell& c = row[i];
            if (const auto* s = std::get_if<std::string>(&c))
                obj[table.columns[i]] = *s;
            else if (const auto* d = std::get_if<double>(&c)) {
                // JSON has no inf/nan literals; fall back to strings there so
                // the document stays valid.
                if (std::isfinite(*d))
                    obj[table.columns[i]] = *d;
                else
                    obj[table.columns[i]] = format_double(*d);
            } else
                obj[table.columns[i]] = std::get<long long>(c);
        }
        rows.push_back(std::move(obj));
    }
    root["rows"] = std::move(rows);
    root["verdict"] = verdict;
    return root.dump(2) + "\n";
}

}  // namespace hardylab::report
