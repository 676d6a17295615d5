#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"

namespace lorentzx {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kModules =
    "exponent/1,grid/1,norms/1,hardy/1,operators/1,ergodic/1,cli/1";

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hex16(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// First line of every CSV artifact: version, module versions, config hash.
inline std::string csv_banner(const std::string& config_hash) {
    return std::string("# lorentzx ") + kVersion + " modules=" + kModules +
           " config=" + config_hash + "\n";
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary); // LF endings everywhere
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// StepFunction CSV: columns t_left,t_right,value; contiguous cells

inline std::string step_to_csv(const StepFunction& f, const std::string& config_hash) {
    std::string out = csv_banner(config_hash);
    out += "t_left,t_right,value\n";
    for (std::size_t i = 0; i < f.cells(); ++i) {
        out += format_double(f.partition().left(i)) + "," +
               format_double(f.partition().right(i)) + "," + format_double(f.value(i)) + "\n";
    }
    return out;
}

inline StepFunction step_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<double> pts, vals;
    std::size_t lineno = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) { // column header
            saw_header = true;
            continue;
        }
        std::istringstream row(line);
        std::string a, b, c;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c))
            throw std::runtime_error("CSV line " + std::to_string(lineno) + ": expected 3 columns");
        double lo = std::stod(a), hi = std::stod(b), v = std::stod(c);
        if (pts.empty()) {
            pts.push_back(lo);
        } else if (pts.back() != lo) {
            throw std::runtime_error("CSV line " + std::to_string(lineno) +
                                     ": cells must be contiguous");
        }
        if (!(hi > lo))
            throw std::runtime_error("CSV line " + std::to_string(lineno) + ": empty cell");
        pts.push_back(hi);
        vals.push_back(v);
    }
    if (vals.empty()) throw std::runtime_error("CSV: no data rows");
    return StepFunction(Partition::from_breakpoints(std::move(pts)), std::move(vals));
}

inline StepFunction read_step_csv(const std::string& path) {
    return step_from_csv(read_text_file(path));
}

} // namespace lorentzx
