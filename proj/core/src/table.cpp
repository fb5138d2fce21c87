#include "kgioh/table.hpp"

#include <cmath>
#include <cstdio>

#include "kgioh/errors.hpp"

namespace kgioh {

SweepTable::SweepTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void SweepTable::add_row(std::vector<double> row) {
    if (row.size() != columns_.size())
        throw DimensionError("row has " + std::to_string(row.size()) + " cells, table has " +
                             std::to_string(columns_.size()) + " columns");
    rows_.push_back(std::move(row));
}

void SweepTable::set_meta(const std::string& key, const std::string& value) {
    for (auto& kv : meta_)
        if (kv.first == key) {
            kv.second = value;
            return;
        }
    meta_.emplace_back(key, value);
}

bool SweepTable::has_meta(const std::string& key) const {
    for (const auto& kv : meta_)
        if (kv.first == key) return true;
    return false;
}

const std::string& SweepTable::meta(const std::string& key) const {
    for (const auto& kv : meta_)
        if (kv.first == key) return kv.second;
    throw DomainError("no metadata key " + key);
}

std::size_t SweepTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i] == name) return i;
    throw DomainError("no column " + name);
}

std::vector<double> SweepTable::column(const std::string& name) const {
    const std::size_t j = column_index(name);
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) out.push_back(r[j]);
    return out;
}

double SweepTable::at(std::size_t row, const std::string& name) const { return rows_.at(row)[column_index(name)]; }

std::string SweepTable::to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) out += ',';
        out += columns_[i];
    }
    out += '\n';
    for (const auto& r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out += ',';
            out += format_double(r[i]);
        }
        out += '\n';
    }
    return out;
}

std::string format_double(double v) {
    // printf's %e is locale independent for the digits and exponent; the
    // decimal point is pinned by hand.
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    for (char* c = buf; *c; ++c)
        if (*c == ',') *c = '.';
    return buf;
}

}  // namespace kgioh
