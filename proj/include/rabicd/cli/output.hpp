#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rabicd/cli/config.hpp"

namespace rabicd::cli {

inline constexpr const char* kArtifactVersion = "1.0.0";

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
};

struct Report {
    std::string command;
    RunConfig config;
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<Table> tables;
};

// Shortest form is not used: always 17 significant digits, '.' decimal point.
std::string format_real(double v);

void write_csv(const Report& report, std::ostream& out);
void write_json(const Report& report, std::ostream& out);
void write_report(const Report& report, std::ostream& out);

}  // namespace rabicd::cli
