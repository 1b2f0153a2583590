#pragma once

// CSV emission with a fixed column order and 15 significant digits.

#include <initializer_list>
#include <string>
#include <vector>

namespace quakebend::csv {

/// Shortest general form with at most 15 significant digits; "nan", "inf", "-inf" otherwise.
std::string format(double v);

class Table {
public:
    explicit Table(std::vector<std::string> header);

    /// Throws InvalidArgument when the width differs from the header.
    void add_row(const std::vector<double>& values);

    std::size_t rows() const { return rows_.size(); }
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<double>> rows_;
};

} // namespace quakebend::csv
