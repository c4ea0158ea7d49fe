#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <variant>
#include <vector>

#include "copl/model.hpp"

namespace copl {

struct Value;

struct VoidValue {
    bool operator==(const VoidValue&) const = default;
};

// Fixed-length text, right-padded with spaces to exactly `length` chars.
struct CharArray {
    int length = 0;
    std::string text;
};

// An embedded value of a concept: the concept's own declared fields only.
struct ConceptValue {
    const ConceptInfo* conceptInfo = nullptr;
    std::vector<Value> fields;
};

// One relative address within a reference: a concept plus its field values.
// Segments are identity and never mutate after construction.
struct Segment {
    const ConceptInfo* conceptInfo = nullptr;
    std::vector<Value> fields;
};

// A hierarchical object address: a primitive handle plus one segment per
// concept on the inclusion chain, outermost first.
struct Reference {
    std::int64_t handle = 0;
    std::vector<Segment> segments;

    const Segment& innermost() const { return segments.back(); }
};

struct Value {
    std::variant<VoidValue, std::int64_t, double, bool, std::string, CharArray,
                 ConceptValue, Reference>
        data;

    Value() : data(VoidValue{}) {}
    Value(std::int64_t v) : data(v) {}
    Value(int v) : data(static_cast<std::int64_t>(v)) {}
    Value(double v) : data(v) {}
    Value(bool v) : data(v) {}
    Value(std::string v) : data(std::move(v)) {}
    Value(const char* v) : data(std::string(v)) {}
    Value(CharArray v) : data(std::move(v)) {}
    Value(ConceptValue v) : data(std::move(v)) {}
    Value(Reference v) : data(std::move(v)) {}

    bool is_void() const { return std::holds_alternative<VoidValue>(data); }
    bool is_int() const { return std::holds_alternative<std::int64_t>(data); }
    bool is_double() const { return std::holds_alternative<double>(data); }
    bool is_bool() const { return std::holds_alternative<bool>(data); }
    bool is_str() const { return std::holds_alternative<std::string>(data); }
    bool is_char_array() const { return std::holds_alternative<CharArray>(data); }
    bool is_concept_value() const { return std::holds_alternative<ConceptValue>(data); }
    bool is_reference() const { return std::holds_alternative<Reference>(data); }

    std::int64_t as_int() const { return std::get<std::int64_t>(data); }
    double as_double() const { return std::get<double>(data); }
    bool as_bool() const { return std::get<bool>(data); }
    const std::string& as_str() const { return std::get<std::string>(data); }
    const CharArray& as_char_array() const { return std::get<CharArray>(data); }
    const ConceptValue& as_concept_value() const { return std::get<ConceptValue>(data); }
    ConceptValue& as_concept_value() { return std::get<ConceptValue>(data); }
    const Reference& as_reference() const { return std::get<Reference>(data); }
};

bool operator==(const Value& a, const Value& b);

inline bool operator==(const CharArray& a, const CharArray& b) {
    return a.length == b.length && a.text == b.text;
}
inline bool operator!=(const CharArray& a, const CharArray& b) { return !(a == b); }

inline bool operator==(const ConceptValue& a, const ConceptValue& b) {
    return a.conceptInfo == b.conceptInfo && a.fields == b.fields;
}
inline bool operator!=(const ConceptValue& a, const ConceptValue& b) { return !(a == b); }

inline bool operator==(const Segment& a, const Segment& b) {
    return a.conceptInfo == b.conceptInfo && a.fields == b.fields;
}
inline bool operator!=(const Segment& a, const Segment& b) { return !(a == b); }

inline bool operator==(const Reference& a, const Reference& b) {
    return a.handle == b.handle && a.segments == b.segments;
}
inline bool operator!=(const Reference& a, const Reference& b) { return !(a == b); }

// Structural equality across every variant.
inline bool operator==(const Value& a, const Value& b) { return a.data == b.data; }
inline bool operator!=(const Value& a, const Value& b) { return !(a == b); }

inline bool ref_equals(const Reference& a, const Reference& b) { return a == b; }

// Right-trims the space padding (display form of a char array).
inline std::string char_array_display(const CharArray& ca) {
    std::size_t end = ca.text.find_last_not_of(' ');
    return end == std::string::npos ? std::string() : ca.text.substr(0, end + 1);
}

inline CharArray make_char_array(int length, std::string_view text) {
    CharArray ca;
    ca.length = length;
    ca.text.assign(text);
    ca.text.resize(static_cast<std::size_t>(length), ' ');
    return ca;
}

void serialize_reference(const Reference& r, std::string& out);

// Injective byte encoding, used as the object-store key. Doubles are encoded
// by bit pattern with negative zero normalized so references that compare
// equal serialize identically.
inline void serialize_value(const Value& v, std::string& out) {
    auto put_size = [&out](std::size_t n) {
        out += std::to_string(n);
        out += ':';
    };
    std::visit(ast::overloaded{
                   [&](const VoidValue&) { out += "v;"; },
                   [&](std::int64_t n) {
                       out += 'i';
                       out += std::to_string(n);
                       out += ';';
                   },
                   [&](double d) {
                       if (d == 0.0) d = 0.0;  // fold -0.0
                       std::uint64_t bits;
                       std::memcpy(&bits, &d, sizeof bits);
                       out += 'd';
                       out += std::to_string(bits);
                       out += ';';
                   },
                   [&](bool b) { out += b ? "bt;" : "bf;"; },
                   [&](const std::string& s) {
                       out += 's';
                       put_size(s.size());
                       out += s;
                       out += ';';
                   },
                   [&](const CharArray& ca) {
                       out += 'c';
                       put_size(ca.text.size());
                       out += ca.text;
                       out += ';';
                   },
                   [&](const ConceptValue& cv) {
                       out += 'C';
                       put_size(cv.conceptInfo->name.size());
                       out += cv.conceptInfo->name;
                       put_size(cv.fields.size());
                       for (const Value& f : cv.fields) serialize_value(f, out);
                       out += ';';
                   },
                   [&](const Reference& r) {
                       out += 'R';
                       serialize_reference(r, out);
                       out += ';';
                   },
               },
               v.data);
}

inline void serialize_reference(const Reference& r, std::string& out) {
    out += 'h';
    out += std::to_string(r.handle);
    out += ';';
    for (const Segment& seg : r.segments) {
        out += 'g';
        out += std::to_string(seg.conceptInfo->name.size());
        out += ':';
        out += seg.conceptInfo->name;
        for (const Value& f : seg.fields) serialize_value(f, out);
        out += ';';
    }
}

}  // namespace copl
