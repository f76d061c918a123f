#pragma once

#include "sumlevel/rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace sumlevel {

/// Empty cells serialise as "" in CSV and null in JSON.
using Cell = std::variant<std::monostate, std::int64_t, std::uint64_t, double, std::string, bool, Rational>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

enum class Format { Csv, Json };

/// Shortest decimal that reads back to the same double; "nan", "inf", "-inf" otherwise.
std::string format_double(double value);

std::string format_cell(const Cell& cell);

void emit(const Table& table, Format format, std::ostream& out);

} // namespace sumlevel
