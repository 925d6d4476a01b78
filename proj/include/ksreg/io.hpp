#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ksreg/charts.hpp"
#include "ksreg/flow.hpp"

namespace ksreg {

constexpr int kFormatVersion = 1;

// CSV with a mandatory header row under a "# format_version" comment line.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

void write_csv(std::ostream& os, const CsvTable& table);
std::string csv_to_string(const CsvTable& table);

// Parses a CSV document. Malformed rows are collected (1-based line numbers)
// rather than thrown, so callers can report every offending line at once.
struct CsvParseResult {
    CsvTable table;
    std::vector<std::pair<int, std::string>> errors;
};
CsvParseResult read_csv(std::istream& is);

// Comma-separated numbers, e.g. an inline --ic / --point flag value.
std::vector<double> parse_number_list(const std::string& text);

// Trajectory export, columns s,t,state...,H,Xi0,Xi1.
CsvTable trajectory_table(const Trajectory& traj, const std::vector<std::string>& state_names);
std::string trajectory_jsonl(const Trajectory& traj, const std::vector<std::string>& state_names);
std::vector<std::string> state_column_names(const HamiltonianSpec& spec);

// Chart records as JSON objects keyed by the documented field names.
std::string euler_chart_to_json(const EulerChart& c);
EulerChart euler_chart_from_json(const std::string& text);
std::string andoyer_chart_to_json(const AndoyerChart& c);
AndoyerChart andoyer_chart_from_json(const std::string& text);

}  // namespace ksreg
