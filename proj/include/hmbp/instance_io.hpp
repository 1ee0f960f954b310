#pragma once

// Plain-text instance files and human-readable reports.
//
//   # comment
//   d: 6
//   w: 5 5 3 1 1 0
//   C: 17 17 17 17 17 8
//
// Each key appears exactly once, in any order.

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hmbp/core.hpp"

namespace hmbp {

class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline Int parse_int(const std::string& token, const std::string& where) {
    std::size_t used = 0;
    Int value = 0;
    try {
        value = std::stoll(token, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != token.size()) {
        throw ParseError(where + ": '" + token + "' is not an integer");
    }
    return value;
}

inline std::vector<Int> parse_ints(const std::string& text, const std::string& where) {
    std::istringstream is(text);
    std::vector<Int> out;
    std::string token;
    while (is >> token) {
        out.push_back(parse_int(token, where));
    }
    return out;
}

}  // namespace detail

inline Instance parse_instance(const std::string& text) {
    std::optional<Int> d;
    std::optional<std::vector<Int>> w, c;
    std::size_t w_line = 0, c_line = 0;
    std::istringstream is(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        const std::string line = detail::trim(raw);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const std::string where = "line " + std::to_string(line_no);
        const auto colon = line.find(':');
        if (colon == std::string::npos) {
            throw ParseError(where + ": expected 'key: values'");
        }
        const std::string key = detail::trim(line.substr(0, colon));
        const std::string rest = line.substr(colon + 1);
        if (key == "d") {
            if (d) {
                throw ParseError(where + ": duplicate key d");
            }
            const auto values = detail::parse_ints(rest, where);
            if (values.size() != 1) {
                throw ParseError(where + ": d takes exactly one integer");
            }
            if (values[0] < 1) {
                throw ParseError(where + ": d must be positive");
            }
            d = values[0];
        } else if (key == "w" || key == "C") {
            auto& slot = key == "w" ? w : c;
            if (slot) {
                throw ParseError(where + ": duplicate key " + key);
            }
            auto values = detail::parse_ints(rest, where);
            if (values.empty()) {
                throw ParseError(where + ": " + key + " is empty");
            }
            for (std::size_t i = 1; i < values.size(); ++i) {
                if (values[i] > values[i - 1]) {
                    throw ParseError(where + ": " + key + " not non-increasing at position " +
                                     std::to_string(i + 1));
                }
            }
            if (key == "w") {
                for (std::size_t i = 0; i < values.size(); ++i) {
                    if (values[i] < 0) {
                        throw ParseError(where + ": w has a negative entry at position " +
                                         std::to_string(i + 1));
                    }
                }
            }
            (key == "w" ? w_line : c_line) = line_no;
            slot = std::move(values);
        } else {
            throw ParseError(where + ": unknown key '" + key + "'");
        }
    }
    if (!d) {
        throw ParseError("missing key d");
    }
    if (!w) {
        throw ParseError("missing key w");
    }
    if (!c) {
        throw ParseError("missing key C");
    }
    if (w->size() != c->size()) {
        throw ParseError("line " + std::to_string(std::max(w_line, c_line)) + ": w has " +
                         std::to_string(w->size()) + " entries but C has " +
                         std::to_string(c->size()));
    }
    return Instance(*d, WeightProfile(*w), CapacityProfile(*c));
}

/// Renders an instance; `header` lines are written as comments first.
inline std::string render_instance(const Instance& inst,
                                   const std::vector<std::string>& header = {}) {
    std::ostringstream os;
    for (const auto& line : header) {
        os << "# " << line << '\n';
    }
    os << "d: " << inst.d << '\n';
    os << "w: " << inst.weights.to_string() << '\n';
    os << "C: " << inst.capacities.to_string() << '\n';
    return os.str();
}

/// One line per bin (contents, weight, capacity, gap) followed by the raw
/// count matrix, one row per ball class.
inline std::string render_assignment(const Assignment& a, const CapacityProfile& c) {
    std::ostringstream os;
    for (std::size_t j = 0; j < a.num_bins(); ++j) {
        const Int weight = a.bin_weight(j);
        os << "bin " << j + 1 << ": " << format_bin(a.contents(j)) << "  weight " << weight
           << "  capacity " << c[j] << "  gap " << c[j] - weight << '\n';
    }
    os << "counts (rows: weight; columns: bins)\n";
    for (std::size_t cl = 0; cl < a.num_classes(); ++cl) {
        os << a.class_value(cl) << ':';
        for (std::size_t j = 0; j < a.num_bins(); ++j) {
            os << ' ' << a.count(cl, j);
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace hmbp
