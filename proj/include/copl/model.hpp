#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "copl/ast.hpp"
#include "copl/source.hpp"

namespace copl {

struct ConceptInfo;

struct SemType {
    enum class Kind { Void, Int, Double, Bool, Str, CharArray, Concept };
    Kind kind = Kind::Void;
    int charLen = 0;                        // CharArray only
    const ConceptInfo* conceptInfo = nullptr;  // Concept only

    bool operator==(const SemType&) const = default;
};

std::string type_name(const SemType& t);

struct FieldInfo {
    std::string name;
    SemType type;
    Pos pos;
};

struct PropertyInfo {
    std::string name;
    SemType type;
    const ast::PropertyDecl* decl = nullptr;

    bool is_auto() const { return decl->is_auto(); }
};

struct MethodInfo {
    const ast::MethodDecl* decl = nullptr;
    SemType returnType;
    std::vector<SemType> paramTypes;
};

// A resolved concept: identity fields, dual method tables, properties, and
// the inclusion chain down from its outermost ancestor.
struct ConceptInfo {
    std::string name;
    Pos pos;

    enum class ParentKind { None, Root, Concept } parentKind = ParentKind::None;
    const ConceptInfo* parent = nullptr;  // ParentKind::Concept only

    std::vector<FieldInfo> fields;  // own fields, declaration order
    std::map<std::string, MethodInfo> inMethods;
    std::map<std::string, MethodInfo> outMethods;
    std::map<std::string, PropertyInfo> properties;

    // outermost ancestor first, this concept last; set by the analyzer
    std::vector<const ConceptInfo*> chain;
    // true when the chain is rooted at the MemoryHandle primitive space
    bool instantiable = false;

    const FieldInfo* find_field(const std::string& n) const {
        for (const auto& f : fields)
            if (f.name == n) return &f;
        return nullptr;
    }
    const PropertyInfo* find_property(const std::string& n) const {
        auto it = properties.find(n);
        return it == properties.end() ? nullptr : &it->second;
    }
    const MethodInfo* find_in(const std::string& n) const {
        auto it = inMethods.find(n);
        return it == inMethods.end() ? nullptr : &it->second;
    }
    const MethodInfo* find_out(const std::string& n) const {
        auto it = outMethods.find(n);
        return it == outMethods.end() ? nullptr : &it->second;
    }
};

inline std::string type_name(const SemType& t) {
    using K = SemType::Kind;
    switch (t.kind) {
        case K::Void: return "void";
        case K::Int: return "int";
        case K::Double: return "double";
        case K::Bool: return "bool";
        case K::Str: return "string";
        case K::CharArray: return "char[" + std::to_string(t.charLen) + "]";
        case K::Concept: return t.conceptInfo ? t.conceptInfo->name : "<concept>";
    }
    return "<type>";
}

// Name of the built-in primitive space at the root of instantiable chains.
inline constexpr const char* kRootSpaceName = "MemoryHandle";

struct ProgramModel {
    // unique_ptr keeps ConceptInfo addresses stable across REPL merges
    std::map<std::string, std::unique_ptr<ConceptInfo>> concepts;
    std::vector<const ast::Stmt*> topStatements;

    const ConceptInfo* find_concept(const std::string& name) const {
        auto it = concepts.find(name);
        return it == concepts.end() ? nullptr : it->second.get();
    }
};

// Chain from the outermost ancestor down to the concept itself; length >= 1.
inline const std::vector<const ConceptInfo*>& inclusion_chain(const ConceptInfo& c) {
    return c.chain;
}

}  // namespace copl
