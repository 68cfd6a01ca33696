#pragma once

// CSV formats for the command-line front end. Complex data travels as
// paired re,im columns, samples as an x column (x,y in 2D), frequencies as
// an omega column; a header row is mandatory everywhere. Parse failures
// throw CsvError carrying the file name and 1-based line number.

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nufft/fft.hpp"

namespace nufft {

struct CsvError : std::runtime_error {
    CsvError(const std::string& file, std::size_t line, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what) {}
};

namespace csv {

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline double parse_double(const std::string& field, const std::string& file,
                           std::size_t line) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    while (end && *end == ' ') ++end;
    if (end == field.c_str() || (end && *end != '\0') || errno == ERANGE)
        throw CsvError(file, line, "expected a number, got '" + field + "'");
    return v;
}

inline std::vector<std::vector<double>> read_table(const std::string& path,
                                                   std::size_t expect_cols,
                                                   const std::string& expect_header) {
    std::ifstream in(path);
    if (!in) throw CsvError(path, 0, "cannot open file");
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw CsvError(path, 1, "missing header row");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (expect_cols > 0 && split_fields(line).size() != expect_cols)
        throw CsvError(path, 1, "expected header '" + expect_header + "'");

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (expect_cols > 0 && fields.size() != expect_cols)
            throw CsvError(path, lineno,
                           "expected " + std::to_string(expect_cols) + " columns, got " +
                               std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(parse_double(f, path, lineno));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw CsvError(path, lineno, "no data rows");
    return rows;
}

}  // namespace csv

inline std::vector<double> read_reals(const std::string& path, const std::string& header) {
    const auto rows = csv::read_table(path, 1, header);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[0]);
    return out;
}

inline std::vector<double> read_samples(const std::string& path) {
    return read_reals(path, "x");
}

inline std::vector<double> read_frequencies(const std::string& path) {
    return read_reals(path, "omega");
}

inline void read_samples_2d(const std::string& path, std::vector<double>& x,
                            std::vector<double>& y) {
    const auto rows = csv::read_table(path, 2, "x,y");
    x.clear();
    y.clear();
    for (const auto& r : rows) {
        x.push_back(r[0]);
        y.push_back(r[1]);
    }
}

inline ComplexVector read_complex_vector(const std::string& path) {
    const auto rows = csv::read_table(path, 2, "re,im");
    ComplexVector out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.emplace_back(r[0], r[1]);
    return out;
}

/// Matrix file: n re/im column pairs (header re0,im0,...), m data rows.
inline ComplexMatrix read_complex_matrix(const std::string& path) {
    const auto rows = csv::read_table(path, 0, "");
    const std::size_t cols2 = rows[0].size();
    if (cols2 == 0 || cols2 % 2 != 0)
        throw CsvError(path, 2, "matrix rows need an even number of columns (re/im pairs)");
    ComplexMatrix m(rows.size(), cols2 / 2);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols2)
            throw CsvError(path, r + 2, "ragged matrix row");
        for (std::size_t c = 0; c < cols2 / 2; ++c)
            m.at(r, c) = Complex(rows[r][2 * c], rows[r][2 * c + 1]);
    }
    return m;
}

inline void write_complex_vector(const std::string& path, const ComplexVector& v) {
    std::ofstream out(path);
    if (!out) throw CsvError(path, 0, "cannot open file for writing");
    out << "re,im\n";
    char buf[64];
    for (const auto& z : v) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", z.real(), z.imag());
        out << buf;
    }
    if (!out) throw CsvError(path, 0, "write failed");
}

}  // namespace nufft
