#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "copl/ast.hpp"
#include "copl/model.hpp"
#include "copl/source.hpp"

namespace copl {

namespace detail {

class Resolver {
public:
    Resolver(ProgramModel& model, const ast::Program& prog)
        : model_(model), prog_(prog) {}

    // Validates the program's declarations against the existing model and
    // commits them only when the whole batch is consistent, so a failed
    // REPL input leaves the session model untouched.
    void run() {
        collect_shells();
        link_parents();
        check_cycles_and_chains();
        for (const auto& decl : prog_.concepts) resolve_members(decl);
        check_statement_types();
        commit();
    }

private:
    ProgramModel& model_;
    const ast::Program& prog_;
    std::map<std::string, std::unique_ptr<ConceptInfo>> pending_;

    ConceptInfo* lookup(const std::string& name) {
        if (auto it = pending_.find(name); it != pending_.end()) return it->second.get();
        if (auto it = model_.concepts.find(name); it != model_.concepts.end())
            return it->second.get();
        return nullptr;
    }

    void collect_shells() {
        for (const auto& decl : prog_.concepts) {
            if (decl.name == kRootSpaceName)
                throw Error(ErrorKind::DuplicateConcept, decl.pos,
                            "concept name '" + decl.name + "' is reserved");
            if (lookup(decl.name))
                throw Error(ErrorKind::DuplicateConcept, decl.pos,
                            "duplicate concept '" + decl.name + "'");
            auto info = std::make_unique<ConceptInfo>();
            info->name = decl.name;
            info->pos = decl.pos;
            pending_.emplace(decl.name, std::move(info));
        }
    }

    void link_parents() {
        for (const auto& decl : prog_.concepts) {
            ConceptInfo* c = pending_.at(decl.name).get();
            if (!decl.parentName) {
                c->parentKind = ConceptInfo::ParentKind::None;
            } else if (*decl.parentName == kRootSpaceName) {
                c->parentKind = ConceptInfo::ParentKind::Root;
            } else {
                const ConceptInfo* p = lookup(*decl.parentName);
                if (!p)
                    throw Error(ErrorKind::UnknownParent, decl.parentPos,
                                "unknown parent '" + *decl.parentName + "' of concept '" +
                                    decl.name + "'");
                c->parentKind = ConceptInfo::ParentKind::Concept;
                c->parent = p;
            }
        }
    }

    void check_cycles_and_chains() {
        for (auto& [name, c] : pending_) {
            std::set<const ConceptInfo*> seen;
            const ConceptInfo* cur = c.get();
            while (cur->parentKind == ConceptInfo::ParentKind::Concept) {
                if (!seen.insert(cur).second)
                    throw Error(ErrorKind::InclusionCycle, c->pos,
                                "inclusion cycle involving concept '" + name + "'");
                cur = cur->parent;
            }
        }
        for (auto& [name, c] : pending_) {
            std::vector<const ConceptInfo*> chain;
            const ConceptInfo* cur = c.get();
            for (;;) {
                chain.push_back(cur);
                if (cur->parentKind != ConceptInfo::ParentKind::Concept) break;
                cur = cur->parent;
            }
            c->chain.assign(chain.rbegin(), chain.rend());
            c->instantiable =
                c->chain.front()->parentKind == ConceptInfo::ParentKind::Root;
        }
    }

    SemType resolve_type(const ast::TypeRef& t) {
        using K = ast::TypeRef::Kind;
        switch (t.kind) {
            case K::Void: return {SemType::Kind::Void, 0, nullptr};
            case K::Int: return {SemType::Kind::Int, 0, nullptr};
            case K::Double: return {SemType::Kind::Double, 0, nullptr};
            case K::Bool: return {SemType::Kind::Bool, 0, nullptr};
            case K::Str: return {SemType::Kind::Str, 0, nullptr};
            case K::CharArray:
                if (t.charLen < 1)
                    throw Error(ErrorKind::BadCharArraySize, t.pos,
                                "char array length must be at least 1");
                return {SemType::Kind::CharArray, t.charLen, nullptr};
            case K::Named: {
                const ConceptInfo* c = lookup(t.name);
                if (!c)
                    throw Error(ErrorKind::UnknownType, t.pos,
                                "unknown type '" + t.name + "'");
                return {SemType::Kind::Concept, 0, c};
            }
        }
        throw Error(ErrorKind::UnknownType, t.pos, "unknown type");
    }

    void resolve_members(const ast::ConceptDecl& decl) {
        ConceptInfo* c = pending_.at(decl.name).get();
        std::set<std::string> names;  // fields, methods, properties share one namespace
        auto claim = [&](const std::string& n, Pos pos) {
            if (!names.insert(n).second)
                throw Error(ErrorKind::DuplicateMember, pos,
                            "duplicate member '" + n + "' in concept '" + decl.name + "'");
        };

        for (const auto& member : decl.members) {
            std::visit(
                ast::overloaded{
                    [&](const ast::FieldDecl& f) {
                        claim(f.name, f.pos);
                        c->fields.push_back({f.name, resolve_type(f.type), f.pos});
                    },
                    [&](const ast::MethodDecl& m) {
                        auto& table = m.direction == ast::Direction::In ? c->inMethods
                                                                        : c->outMethods;
                        if (table.count(m.name))
                            throw Error(ErrorKind::DuplicateMember, m.pos,
                                        "duplicate member '" + m.name + "' in concept '" +
                                            decl.name + "'");
                        // the dual of an existing method reuses the claimed name
                        auto& other = m.direction == ast::Direction::In ? c->outMethods
                                                                        : c->inMethods;
                        if (!other.count(m.name)) claim(m.name, m.pos);
                        MethodInfo info;
                        info.decl = &m;
                        info.returnType = resolve_type(m.returnType);
                        for (const auto& p : m.params)
                            info.paramTypes.push_back(resolve_type(p.type));
                        table.emplace(m.name, std::move(info));
                    },
                    [&](const ast::PropertyDecl& p) {
                        claim(p.name, p.pos);
                        c->properties.emplace(
                            p.name, PropertyInfo{p.name, resolve_type(p.type), &p});
                    },
                },
                member.node);
        }

        for (const auto& [name, in] : c->inMethods) {
            const MethodInfo* out = c->find_out(name);
            if (!out) continue;
            if (in.returnType != out->returnType || in.paramTypes != out->paramTypes)
                throw Error(ErrorKind::DualSignatureMismatch, out->decl->pos,
                            "dual method signature mismatch for '" + name +
                                "' in concept '" + decl.name + "'");
        }
    }

    // Declared types inside bodies must resolve even though execution is
    // dynamically checked.
    void check_statement_types() {
        for (const auto& decl : prog_.concepts) {
            for (const auto& member : decl.members) {
                std::visit(ast::overloaded{
                               [&](const ast::FieldDecl&) {},
                               [&](const ast::MethodDecl& m) { check_block(m.body); },
                               [&](const ast::PropertyDecl& p) {
                                   if (p.getBody) check_block(*p.getBody);
                                   if (p.setBody) check_block(*p.setBody);
                               },
                           },
                           member.node);
            }
        }
        for (const auto& s : prog_.statements) check_stmt(*s);
    }

    void check_block(const ast::Block& b) {
        for (const auto& s : b.statements) check_stmt(*s);
    }

    void check_stmt(const ast::Stmt& s) {
        std::visit(ast::overloaded{
                       [&](const ast::VarDecl& v) { resolve_type(v.type); },
                       [&](const ast::Assign&) {},
                       [&](const ast::If& n) {
                           check_stmt(*n.thenBranch);
                           if (n.elseBranch) check_stmt(*n.elseBranch);
                       },
                       [&](const ast::While& n) { check_stmt(*n.body); },
                       [&](const ast::Return&) {},
                       [&](const ast::ExprStmt&) {},
                       [&](const ast::Block& b) { check_block(b); },
                   },
                   s.node);
    }

    void commit() {
        for (auto& [name, info] : pending_)
            model_.concepts.emplace(name, std::move(info));
    }
};

}  // namespace detail

// Merges the program's concept declarations into an existing model (REPL use).
// Top-level statements are not recorded; the caller owns their execution.
inline void merge_program(ProgramModel& model, const ast::Program& prog) {
    detail::Resolver(model, prog).run();
}

// Resolves a whole program into a fresh model. The AST must outlive the model.
inline ProgramModel resolve(const ast::Program& prog) {
    ProgramModel model;
    merge_program(model, prog);
    for (const auto& s : prog.statements) model.topStatements.push_back(s.get());
    return model;
}

}  // namespace copl
