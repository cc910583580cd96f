#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

// Sample file interface: one non-negative decimal per line, LF-terminated,
// '#'-prefixed comment lines ignored. Numbers are written as the shortest
// decimal that round-trips the double exactly.

namespace ageing {

struct ParseError : std::runtime_error {
    std::size_t line = 0;
    ParseError(std::size_t line_no, const std::string& message)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + message), line(line_no) {}
};

inline std::string format_double(double value) {
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

inline std::vector<double> parse_sample_lines(std::istream& in) {
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t begin = line.find_first_not_of(" \t");
        if (begin == std::string::npos) continue; // blank line
        if (line[begin] == '#') continue;
        const std::size_t end = line.find_last_not_of(" \t") + 1;
        double value = 0.0;
        const char* first = line.data() + begin;
        const char* last = line.data() + end;
        const auto result = std::from_chars(first, last, value);
        if (result.ec != std::errc{} || result.ptr != last) {
            throw ParseError(line_no, "expected a decimal number, got \"" +
                                          line.substr(begin, end - begin) + "\"");
        }
        if (!std::isfinite(value) || value < 0.0) {
            throw ParseError(line_no, "observations must be finite and non-negative");
        }
        values.push_back(value);
    }
    return values;
}

inline std::vector<double> read_sample_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open input file: " + path);
    }
    return parse_sample_lines(in);
}

inline void write_sample_file(const std::string& path, std::span<const double> values) {
    std::ofstream out(path, std::ios::binary); // binary keeps LF line endings everywhere
    if (!out) {
        throw std::runtime_error("cannot open output file for writing: " + path);
    }
    for (double v : values) {
        out << format_double(v) << '\n';
    }
    if (!out) {
        throw std::runtime_error("failed while writing: " + path);
    }
}

} // namespace ageing
