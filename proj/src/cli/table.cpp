#include "sumlevel/table.hpp"

#include "sumlevel/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <ostream>

namespace sumlevel {

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw DomainError("row has " + std::to_string(row.size()) + " cells, table has " +
                          std::to_string(columns.size()) + " columns");
    }
    rows.push_back(std::move(row));
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, end);
}

namespace {

struct CellText {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(std::uint64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const Rational& v) const { return v.str(); }
};

struct CellJson {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
    nlohmann::ordered_json operator()(std::uint64_t v) const { return v; }
    nlohmann::ordered_json operator()(double v) const {
        if (!std::isfinite(v)) return nullptr;
        return v;
    }
    nlohmann::ordered_json operator()(const std::string& v) const { return v; }
    nlohmann::ordered_json operator()(bool v) const { return v; }
    nlohmann::ordered_json operator()(const Rational& v) const { return v.str(); }
};

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

} // namespace

std::string format_cell(const Cell& cell) { return std::visit(CellText{}, cell); }

void emit(const Table& table, Format format, std::ostream& out) {
    if (format == Format::Csv) {
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            out << (i ? "," : "") << table.columns[i];
        }
        out << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                out << (i ? "," : "") << csv_escape(format_cell(row[i]));
            }
            out << '\n';
        }
    } else {
        auto array = nlohmann::ordered_json::array();
        for (const auto& row : table.rows) {
            auto record = nlohmann::ordered_json::object();
            for (std::size_t i = 0; i < row.size(); ++i) {
                record[table.columns[i]] = std::visit(CellJson{}, row[i]);
            }
            array.push_back(record);
        }
        out << array.dump(2) << '\n';
    }
    if (!out) {
        throw IoError("failed writing output");
    }
}

} // namespace sumlevel
