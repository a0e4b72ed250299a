#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "otto/cli/run_config.hpp"

namespace otto::cli {

using Cell = std::variant<double, long long, bool, std::string>;

/// A rectangular table with a metadata block, written as CSV, JSON or a gnuplot table.
struct Dataset {
    std::string name;
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    std::size_t column(const std::string& name) const;
};

/// Scientific notation with 17 significant digits.
std::string format_double(double value);

void write_csv(const Dataset& data, std::ostream& out);
void write_json(const Dataset& data, std::ostream& out);
void write_table(const Dataset& data, std::ostream& out);
void write_dataset(const Dataset& data, OutputFormat format, std::ostream& out);

}  // namespace otto::cli
