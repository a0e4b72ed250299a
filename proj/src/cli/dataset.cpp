#include "otto/cli/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace otto::cli {

std::size_t Dataset::column(const std::string& col) const {
    const auto it = std::find(columns.begin(), columns.end(), col);
    if (it == columns.end()) throw std::out_of_range("dataset has no column '" + col + "'");
    return std::size_t(it - columns.begin());
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", value);
    return buf;
}

namespace {

std::string cell_text(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) return format_double(v);
            else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else return v;
        },
        cell);
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

void write_metadata_comments(const Dataset& data, std::ostream& out, const char* eol) {
    out << "# dataset: " << data.name << eol;
    for (const auto& [k, v] : data.metadata) out << "# " << k << ": " << v << eol;
}

}  // namespace

void write_csv(const Dataset& data, std::ostream& out) {
    write_metadata_comments(data, out, "\r\n");
    for (std::size_t i = 0; i < data.columns.size(); ++i) out << (i ? "," : "") << csv_quote(data.columns[i]);
    out << "\r\n";
    for (const auto& row : data.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_quote(cell_text(row[i]));
        out << "\r\n";
    }
}

void write_table(const Dataset& data, std::ostream& out) {
    write_metadata_comments(data, out, "\n");
    std::vector<std::vector<std::string>> text;
    auto& header = text.emplace_back(data.columns);
    if (!header.empty()) header.front() = "#" + header.front();
    for (const auto& row : data.rows) {
        auto& t = text.emplace_back();
        for (const auto& cell : row) {
            std::string s = cell_text(cell);
            // Whitespace separates columns, so embedded blanks are replaced.
            std::replace_if(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t'; }, '_');
            t.push_back(s.empty() ? "-" : std::move(s));
        }
    }
    std::vector<std::size_t> width(data.columns.size(), 0);
    for (const auto& t : text)
        for (std::size_t i = 0; i < t.size(); ++i) width[i] = std::max(width[i], t[i].size());
    for (const auto& t : text) {
        for (std::size_t i = 0; i < t.size(); ++i) {
            out << t[i];
            if (i + 1 < t.size()) out << std::string(width[i] - t[i].size() + 2, ' ');
        }
        out << '\n';
    }
}

void write_json(const Dataset& data, std::ostream& out) {
    nlohmann::ordered_json j;
    j["dataset"] = data.name;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : data.metadata) meta[k] = v;
    j["metadata"] = meta;
    j["columns"] = data.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : data.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        if (std::isfinite(v)) r[data.columns[i]] = v;
                        else r[data.columns[i]] = nullptr;
                    } else {
                        r[data.columns[i]] = v;
                    }
                },
                row[i]);
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    out << j.dump(2) << '\n';
}

void write_dataset(const Dataset& data, OutputFormat format, std::ostream& out) {
    switch (format) {
        case OutputFormat::csv: write_csv(data, out); return;
        case OutputFormat::json: write_json(data, out); return;
        case OutputFormat::table: write_table(data, out); return;
    }
}

}  // namespace otto::cli
