#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "copl/source.hpp"

namespace copl::ast {

struct Expr;
struct Stmt;
using ExprPtr = std::unique_ptr<Expr>;
using StmtPtr = std::unique_ptr<Stmt>;

struct TypeRef {
    enum class Kind { Void, Int, Double, Bool, Str, CharArray, Named };
    Kind kind = Kind::Void;
    int charLen = 0;       // CharArray only
    std::string name;      // Named only
    Pos pos;
};

// --- expressions ---

struct IntLit {
    std::int64_t value;
};
struct FloatLit {
    double value;
};
struct StrLit {
    std::string value;
};
struct BoolLit {
    bool value;
};
struct Ident {
    std::string name;
};
struct FieldAccess {
    ExprPtr base;
    std::string name;
};
struct MethodCall {
    ExprPtr base;
    std::string name;
    std::vector<ExprPtr> args;
};
// `name(args)` in primary position: a concept-value literal, a builtin, or
// an internal (outgoing) method call — resolved at evaluation time.
struct Call {
    std::string name;
    std::vector<ExprPtr> args;
};
struct SuperCall {
    std::string name;
    std::vector<ExprPtr> args;
};
struct SubCall {
    std::string name;
    std::vector<ExprPtr> args;
};
struct ThisExpr {};
struct ValueKeyword {};
struct NewExpr {
    std::string conceptName;
    std::vector<ExprPtr> args;
    ExprPtr parent;  // null when the `in` clause is omitted
};
struct Unary {
    enum class Op { Neg, Not };
    Op op;
    ExprPtr operand;
};
struct Binary {
    enum class Op { Or, And, Eq, Ne, Lt, Le, Gt, Ge, Add, Sub, Mul, Div, Mod };
    Op op;
    ExprPtr lhs;
    ExprPtr rhs;
};

struct Expr {
    Pos pos;
    std::variant<IntLit, FloatLit, StrLit, BoolLit, Ident, FieldAccess, MethodCall,
                 Call, SuperCall, SubCall, ThisExpr, ValueKeyword, NewExpr, Unary,
                 Binary>
        node;
};

// --- statements ---

struct Block {
    std::vector<StmtPtr> statements;
};
struct VarDecl {
    TypeRef type;
    std::string name;
    ExprPtr init;
};
struct Assign {
    ExprPtr target;  // Ident or FieldAccess
    ExprPtr value;
};
struct If {
    ExprPtr cond;
    StmtPtr thenBranch;
    StmtPtr elseBranch;  // may be null
};
struct While {
    ExprPtr cond;
    StmtPtr body;
};
struct Return {
    ExprPtr value;  // may be null
};
struct ExprStmt {
    ExprPtr expr;
};

struct Stmt {
    Pos pos;
    std::variant<VarDecl, Assign, If, While, Return, ExprStmt, Block> node;
};

// --- declarations ---

enum class Direction { In, Out };

struct Param {
    TypeRef type;
    std::string name;
    Pos pos;
};
struct FieldDecl {
    TypeRef type;
    std::string name;
    Pos pos;
};
struct MethodDecl {
    Direction direction;
    TypeRef returnType;
    std::string name;
    std::vector<Param> params;
    Block body;
    Pos pos;
};
struct PropertyDecl {
    TypeRef type;
    std::string name;
    std::optional<Block> getBody;
    std::optional<Block> setBody;
    Pos pos;

    // auto properties are backed by the object store
    bool is_auto() const { return !getBody && !setBody; }
};

struct Member {
    std::variant<FieldDecl, MethodDecl, PropertyDecl> node;
};

struct ConceptDecl {
    std::string name;
    std::optional<std::string> parentName;
    Pos parentPos;
    std::vector<Member> members;
    Pos pos;
};

struct Program {
    std::vector<ConceptDecl> concepts;
    std::vector<StmtPtr> statements;
};

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace copl::ast
