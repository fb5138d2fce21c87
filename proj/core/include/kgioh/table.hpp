#pragma once

#include <string>
#include <utility>
#include <vector>

namespace kgioh {

// Named real columns plus ordered string metadata. CSV output is
// byte-deterministic: header row, %.12e cells, '\n' line ends.
class SweepTable {
public:
    SweepTable() = default;
    explicit SweepTable(std::vector<std::string> columns);

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<double>>& rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }

    // DimensionError when the row length differs from the column count.
    void add_row(std::vector<double> row);

    // Replaces an existing key in place, otherwise appends.
    void set_meta(const std::string& key, const std::string& value);
    // DomainError for a missing key.
    const std::string& meta(const std::string& key) const;
    bool has_meta(const std::string& key) const;
    const std::vector<std::pair<std::string, std::string>>& metadata() const { return meta_; }

    // DomainError for an unknown column.
    std::size_t column_index(const std::string& name) const;
    std::vector<double> column(const std::string& name) const;
    double at(std::size_t row, const std::string& name) const;

    std::string to_csv() const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
    std::vector<std::pair<std::string, std::string>> meta_;
};

// "%.12e", locale independent.
std::string format_double(double v);

}  // namespace kgioh
