#include "quakebend/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "quakebend/error.hpp"

namespace quakebend::csv {

std::string format(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0; // drop the sign of negative zero
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 15);
    if (ec != std::errc{}) throw NumericalError("floating-point formatting failed");
    return std::string(buf.data(), ptr);
}

Table::Table(std::vector<std::string> header) : header_(std::move(header)) {}

void Table::add_row(const std::vector<double>& values) {
    if (values.size() != header_.size()) throw InvalidArgument("CSV row width differs from the header");
    rows_.push_back(values);
}

std::string Table::str() const {
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (i) out.push_back(',');
        out += header_[i];
    }
    out.push_back('\n');
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out.push_back(',');
            out += format(row[i]);
        }
        out.push_back('\n');
    }
    return out;
}

} // namespace quakebend::csv
