#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include "copl/value.hpp"

namespace copl {

// 12 significant digits, trailing zeros trimmed, always at least one digit
// after the point: 0.02 + 0.01 prints as "0.03", 2.0 as "2.0".
inline std::string format_double(double d) {
    if (std::isnan(d)) return "nan";
    if (std::isinf(d)) return d < 0 ? "-inf" : "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", d);
    std::string s = buf;
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

std::string format_value(const Value& v);

inline std::string format_segment(const std::string& conceptName,
                                  const std::vector<Value>& fields) {
    std::string s = conceptName;
    s += '(';
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) s += ',';
        s += format_value(fields[i]);
    }
    s += ')';
    return s;
}

// Fixed display format; golden outputs depend on it byte for byte.
inline std::string format_value(const Value& v) {
    return std::visit(
        ast::overloaded{
            [](const VoidValue&) { return std::string("void"); },
            [](std::int64_t n) { return std::to_string(n); },
            [](double d) { return format_double(d); },
            [](bool b) { return std::string(b ? "true" : "false"); },
            [](const std::string& s) { return s; },
            [](const CharArray& ca) { return char_array_display(ca); },
            [](const ConceptValue& cv) {
                return format_segment(cv.conceptInfo->name, cv.fields);
            },
            [](const Reference& r) {
                std::string s = "<";
                for (std::size_t i = 0; i < r.segments.size(); ++i) {
                    if (i) s += ':';
                    s += format_segment(r.segments[i].conceptInfo->name,
                                        r.segments[i].fields);
                }
                s += '>';
                return s;
            },
        },
        v.data);
}

}  // namespace copl
