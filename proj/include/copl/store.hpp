#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>

#include "copl/model.hpp"
#include "copl/value.hpp"

namespace copl {

// Reference-keyed object state: one slot per (reference prefix, field name).
// There is no per-object record; objects exist only as functions of their
// references. Also issues the primitive handles for root-level objects.
class ObjectStore {
public:
    std::int64_t issue_handle() { return nextHandle_++; }
    std::int64_t next_handle() const { return nextHandle_; }

    void write(const Reference& prefix, const std::string& field, Value v) {
        slots_[key(prefix, field)] = std::move(v);
    }

    // A slot never written reads as the default for the field's declared type.
    Value read(const Reference& prefix, const std::string& field,
               const SemType& declared) const {
        auto it = slots_.find(key(prefix, field));
        if (it != slots_.end()) return it->second;
        return default_value(declared);
    }

    static Value default_value(const SemType& t) {
        switch (t.kind) {
            case SemType::Kind::Void: return Value();
            case SemType::Kind::Int: return Value(std::int64_t{0});
            case SemType::Kind::Double: return Value(0.0);
            case SemType::Kind::Bool: return Value(false);
            case SemType::Kind::Str: return Value(std::string());
            case SemType::Kind::CharArray: return Value(make_char_array(t.charLen, ""));
            case SemType::Kind::Concept: {
                ConceptValue cv;
                cv.conceptInfo = t.conceptInfo;
                for (const FieldInfo& f : t.conceptInfo->fields)
                    cv.fields.push_back(default_value(f.type));
                return Value(std::move(cv));
            }
        }
        return Value();
    }

    std::size_t slot_count() const { return slots_.size(); }

private:
    static std::string key(const Reference& prefix, const std::string& field) {
        std::string k;
        serialize_reference(prefix, k);
        k += '#';
        k += field;
        return k;
    }

    std::unordered_map<std::string, Value> slots_;
    std::int64_t nextHandle_ = 1;
};

}  // namespace copl
