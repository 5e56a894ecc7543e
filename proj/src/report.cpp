#include "acmdp/report.hpp"

#include <cmath>

#include "acmdp/errors.hpp"
#include "acmdp/scalar.hpp"

namespace acmdp {

CsvTable& CsvTable::row(std::vector<std::string> cells) {
    if (cells.size() != header_.size())
        throw InvalidArgument("CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                              std::to_string(header_.size()));
    rows_.push_back(std::move(cells));
    return *this;
}

std::string CsvTable::str() const {
    std::string out;
    auto emit = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    emit(header_);
    for (const auto& r : rows_) emit(r);
    return out;
}

std::string cell(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    return format_double(value);
}

std::string cell(std::size_t value) { return std::to_string(value); }

std::string cell(bool value) { return value ? "true" : "false"; }

nlohmann::json json_number(double value) {
    if (std::isfinite(value)) return value;
    return cell(value);
}

nlohmann::json json_numbers(const std::vector<double>& values) {
    nlohmann::json arr = nlohmann::json::array();
    for (double v : values) arr.push_back(json_number(v));
    return arr;
}

std::string dump_report(const nlohmann::json& report) { return report.dump(2) + "\n"; }

}  // namespace acmdp
