#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

namespace acmdp {

/// Comma-separated table with a header row and LF line endings.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    CsvTable& row(std::vector<std::string> cells);
    std::size_t size() const { return rows_.size(); }
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Shortest round-trip decimal; "inf", "-inf" and "nan" for non-finite values.
std::string cell(double value);
std::string cell(std::size_t value);
std::string cell(bool value);

/// JSON number, or the strings "inf", "-inf", "nan" for non-finite values.
nlohmann::json json_number(double value);
nlohmann::json json_numbers(const std::vector<double>& values);

/// Version tag carried by every JSON report.
inline constexpr int kReportSchema = 1;

/// Pretty-printed JSON with a trailing newline.
std::string dump_report(const nlohmann::json& report);

}  // namespace acmdp
