#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gausscov/errors.hpp"
#include "gausscov/linmodel.hpp"

namespace gausscov {

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

inline double parse_cell(const std::string& cell, std::size_t row, const std::string& col) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (cell.empty() || end != begin + cell.size())
        throw invalid_input_error("could not parse \"" + cell + "\" as a number at row " +
                                  std::to_string(row) + ", column " + col);
    if (!std::isfinite(value))
        throw invalid_input_error("non-finite value \"" + cell + "\" at row " +
                                  std::to_string(row) + ", column " + col);
    return value;
}

} // namespace detail

/// Reads a comma-separated file with a header row into a Dataset. The
/// response column becomes y; every other column (minus any in drop)
/// becomes a candidate covariate, in file order. Rows are numbered from 1
/// excluding the header. Dialect: plain commas, no quoting.
inline Dataset load_csv(const std::string& path, const std::string& response,
                        const std::vector<std::string>& drop = {}) {
    std::ifstream in(path);
    if (!in) throw invalid_input_error("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw invalid_input_error("file is empty: " + path);
    const auto header = detail::split_csv_line(line);
    if (header.empty()) throw invalid_input_error("header row is empty in " + path);

    for (const auto& name : drop)
        if (std::find(header.begin(), header.end(), name) == header.end())
            throw invalid_input_error("drop column \"" + name + "\" not found in header");

    std::size_t response_col = header.size();
    std::vector<std::size_t> covariate_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == response) {
            response_col = c;
            continue;
        }
        if (std::find(drop.begin(), drop.end(), header[c]) != drop.end()) continue;
        covariate_cols.push_back(c);
    }
    if (response_col == header.size())
        throw invalid_input_error("response column \"" + response + "\" not found in header");
    if (covariate_cols.empty())
        throw invalid_input_error("no covariate columns remain after dropping");

    Dataset d;
    for (std::size_t c : covariate_cols) {
        d.names.push_back(header[c]);
        d.columns.emplace_back();
    }

    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        ++row;
        const auto cells = detail::split_csv_line(line);
        if (cells.size() != header.size())
            throw invalid_input_error("row " + std::to_string(row) + " has " +
                                      std::to_string(cells.size()) + " cells, header has " +
                                      std::to_string(header.size()));
        d.response.push_back(detail::parse_cell(cells[response_col], row, response));
        for (std::size_t i = 0; i < covariate_cols.size(); ++i)
            d.columns[i].push_back(
                detail::parse_cell(cells[covariate_cols[i]], row, d.names[i]));
    }
    if (d.response.size() < 3)
        throw invalid_input_error("need at least 3 data rows, got " +
                                  std::to_string(d.response.size()));
    return d;
}

} // namespace gausscov
