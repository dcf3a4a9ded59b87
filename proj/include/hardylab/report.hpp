#pragma once

// Machine-readable run reports: a small column/row table model serialized to
// CSV (header row, '.' decimal separator, shortest round-trip doubles) or to
// a single JSON object {config, schema_version, rows, verdict}.  Both writers
// are deterministic byte-for-byte for identical inputs, which is what makes
// "rerun with the same config and seed" a meaningful reproducibility check.

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hardylab::report {

// Bumped whenever a column set or the top-level JSON shape changes; emitted
// as a trailing CSV column and a top-level JSON field so downstream plotting
// can detect layout drift.
inline constexpr int kSchemaVersion = 1;

// Shortest decimal string that round-trips to the same double (to_chars);
// infinities and NaNs serialize as "inf"/"-inf"/"nan".
std::string format_double(double x);

// One table entry: free text, a double, or an integer count.
using Cell = std::variant<std::string, double, long long>;

std::string cell_text(const Cell& c);  // unescaped text form

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    // Throws std::logic_error if the row width does not match the header.
    void add_row(std::vector<Cell> row);
};

// Ordered key=value pairs echoing the fully resolved configuration of a run
// (command, flags, seed, thread cap).  Order is preserved in the output.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

// CSV serialization.  The config echo is prepended as '# key=value' comment
// lines so a single file carries everything needed to reproduce it; fields
// containing separators or quotes are double-quoted per RFC 4180.
std::string to_csv(const Table& table, const ConfigEcho& config);

// JSON serialization: {"config": {...}, "schema_version": N,
// "rows": [{column: value, ...}, ...], "verdict": "..."} with insertion
// order preserved.
std::string to_json(const Table& table, const ConfigEcho& config,
                    const std::string& verdict);

}  // namespace hardylab::report
