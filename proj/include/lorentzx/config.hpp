#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "exponent.hpp"
#include "io.hpp"
#include "report.hpp"

namespace lorentzx {

/// Flat sectioned key=value experiment description.  Everything an
/// experiment does is determined by this plus the seed, which is what makes
/// reruns byte-identical.
struct ExperimentConfig {
    std::string kind; // norm | rearrange | hardy-verify | op-verify | ergodic-verify

    // experiment section
    std::string direction = "lower";       // hardy
    std::string op = "maximal";            // op-verify operator
    double op_alpha = 0.25;                // riesz / fractional-maximal order
    std::string flow = "rotation";         // ergodic flow
    std::string check = "boundedness";     // ergodic check
    std::string ergodic_op = "maximal";    // ergodic boundedness operator
    double tolerance = 0.01;               // ergodic distribution tolerance
    std::optional<std::string> expected;   // bounded | blow-up | holds
    bool star = false;                     // norm kind: use f**
    std::string input_csv;                 // norm / rearrange input

    std::map<std::string, std::string> exponent_blocks; // p,q,alpha,beta,nu,gamma

    std::size_t cells = 2048;
    double t_min = std::ldexp(1.0, -120);
    double truncation = std::ldexp(1.0, 120);

    std::size_t family_size = 6;
    std::uint64_t seed = 1;
    std::vector<double> eps_ladder{0.1, 0.03, 0.01, 0.003};
    std::vector<double> spike_ladder{20, 50, 80, 110};
    std::vector<int> dyadic{1, 3, 6, 10};
    std::vector<double> arcs{0.3};

    Protocol protocol;

    std::string out_dir = ".";
    std::string prefix = "experiment";

    std::optional<std::string> sweep_parameter;
    std::vector<double> sweep_values;

    std::string raw_text; // verbatim config, hashed into every artifact

    std::string hash() const { return hex16(fnv1a64(raw_text)); }

    ExponentFunction exponent(const std::string& name, double fallback_constant) const {
        auto it = exponent_blocks.find(name);
        if (it == exponent_blocks.end()) return ExponentFunction::constant(fallback_constant);
        // limitInf=none marks a finite domain whose length is the truncation
        return parse_exponent(it->second, truncation);
    }

    bool has_exponent(const std::string& name) const { return exponent_blocks.count(name) > 0; }
};

namespace detail {

inline std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

inline std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

} // namespace detail

/// Parse the INI-like config text.  Malformed lines report their number.
inline ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    cfg.raw_text = text;
    std::istringstream in(text);
    std::string line, section;
    std::size_t lineno = 0;
    bool sweep_seen = false;

    auto fail = [&](const std::string& why) {
        throw std::runtime_error("config line " + std::to_string(lineno) + ": " + why);
    };

    while (std::getline(in, line)) {
        ++lineno;
        std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') fail("unterminated section header");
            section = detail::trim(t.substr(1, t.size() - 2));
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos) fail("expected key=value");
        std::string key = detail::trim(t.substr(0, eq));
        std::string val = detail::trim(t.substr(eq + 1));
        if (key.empty()) fail("empty key");

        try {
            if (section == "experiment") {
                if (key == "kind") cfg.kind = val;
                else if (key == "direction") cfg.direction = val;
                else if (key == "operator") cfg.op = val;
                else if (key == "alpha") cfg.op_alpha = std::stod(val);
                else if (key == "flow") cfg.flow = val;
                else if (key == "check") cfg.check = val;
                else if (key == "ergodic-op") cfg.ergodic_op = val;
                else if (key == "tolerance") cfg.tolerance = std::stod(val);
                else if (key == "expected") cfg.expected = val;
                else if (key == "star") cfg.star = (val == "true" || val == "1");
                else if (key == "f") cfg.input_csv = val;
                else fail("unknown experiment key '" + key + "'");
            } else if (section == "exponents") {
                if (key != "p" && key != "q" && key != "alpha" && key != "beta" && key != "nu" &&
                    key != "gamma")
                    fail("unknown exponent '" + key + "'");
                cfg.exponent_blocks[key] = val;
            } else if (section == "grid") {
                if (key == "cells") cfg.cells = static_cast<std::size_t>(std::stoull(val));
                else if (key == "t_min") cfg.t_min = std::stod(val);
                else if (key == "truncation") cfg.truncation = std::stod(val);
                else fail("unknown grid key '" + key + "'");
            } else if (section == "family") {
                if (key == "size") cfg.family_size = static_cast<std::size_t>(std::stoull(val));
                else if (key == "seed") cfg.seed = std::stoull(val);
                else if (key == "eps") cfg.eps_ladder = detail::parse_list(val);
                else if (key == "spikes") cfg.spike_ladder = detail::parse_list(val);
                else if (key == "arcs") cfg.arcs = detail::parse_list(val);
                else if (key == "dyadic") {
                    cfg.dyadic.clear();
                    for (double d : detail::parse_list(val)) cfg.dyadic.push_back(static_cast<int>(d));
                } else fail("unknown family key '" + key + "'");
            } else if (section == "protocol") {
                if (key == "flatness") cfg.protocol.flatness = std::stod(val);
                else if (key == "blowup") cfg.protocol.blowup_factor = std::stod(val);
                else if (key == "refinement") cfg.protocol.refinement_factor =
                    static_cast<std::size_t>(std::stoull(val));
                else fail("unknown protocol key '" + key + "'");
            } else if (section == "output") {
                if (key == "dir") cfg.out_dir = val;
                else if (key == "prefix") cfg.prefix = val;
                else fail("unknown output key '" + key + "'");
            } else if (section == "sweep") {
                if (key == "parameter") {
                    if (sweep_seen) fail("multiple swept parameters");
                    sweep_seen = true;
                    if (val.find(',') != std::string::npos) fail("multiple swept parameters");
                    cfg.sweep_parameter = val;
                } else if (key == "values") cfg.sweep_values = detail::parse_list(val);
                else fail("unknown sweep key '" + key + "'");
            } else {
                fail("unknown section '" + section + "'");
            }
        } catch (const std::invalid_argument&) {
            fail("malformed number in '" + val + "'");
        } catch (const std::out_of_range&) {
            fail("number out of range in '" + val + "'");
        }
    }

    if (cfg.kind.empty()) throw std::runtime_error("config: missing [experiment] kind");
    return cfg;
}

} // namespace lorentzx
