#pragma once

#include <sstream>
#include <string>

#include "copl/ast.hpp"

namespace copl {

// Canonical program printer: deterministic layout, fully parenthesized
// operator expressions. parse(tokenize(print_program(ast))) reproduces the
// same structure, which the test suite uses as its structural-equality check.
namespace detail {

class AstPrinter {
public:
    std::string print(const ast::Program& p) {
        for (const auto& c : p.concepts) concept_decl(c);
        for (const auto& s : p.statements) stmt(*s);
        return out_.str();
    }

private:
    std::ostringstream out_;
    int indent_ = 0;

    void line_start() {
        for (int i = 0; i < indent_; ++i) out_ << "    ";
    }

    void concept_decl(const ast::ConceptDecl& c) {
        line_start();
        out_ << "concept " << c.name;
        if (c.parentName) out_ << " in " << *c.parentName;
        out_ << " {\n";
        indent_++;
        for (const auto& m : c.members)
            std::visit([this](const auto& node) { member(node); }, m.node);
        indent_--;
        line_start();
        out_ << "}\n";
    }

    void member(const ast::FieldDecl& f) {
        line_start();
        out_ << type(f.type) << " " << f.name << ";\n";
    }
    void member(const ast::MethodDecl& m) {
        line_start();
        out_ << (m.direction == ast::Direction::In ? "in " : "out ")
             << type(m.returnType) << " " << m.name << "(";
        for (std::size_t i = 0; i < m.params.size(); ++i) {
            if (i) out_ << ", ";
            out_ << type(m.params[i].type) << " " << m.params[i].name;
        }
        out_ << ") ";
        block(m.body);
        out_ << "\n";
    }
    void member(const ast::PropertyDecl& p) {
        line_start();
        out_ << "out " << type(p.type) << " " << p.name;
        if (p.is_auto()) {
            out_ << ";\n";
            return;
        }
        out_ << " {\n";
        indent_++;
        if (p.getBody) {
            line_start();
            out_ << "get ";
            block(*p.getBody);
            out_ << "\n";
        }
        if (p.setBody) {
            line_start();
            out_ << "set ";
            block(*p.setBody);
            out_ << "\n";
        }
        indent_--;
        line_start();
        out_ << "}\n";
    }

    std::string type(const ast::TypeRef& t) {
        using K = ast::TypeRef::Kind;
        switch (t.kind) {
            case K::Void: return "void";
            case K::Int: return "int";
            case K::Double: return "double";
            case K::Bool: return "bool";
            case K::Str: return "string";
            case K::CharArray: return "char[" + std::to_string(t.charLen) + "]";
            case K::Named: return t.name;
        }
        return "void";
    }

    void block(const ast::Block& b) {
        out_ << "{\n";
        indent_++;
        for (const auto& s : b.statements) stmt(*s);
        indent_--;
        line_start();
        out_ << "}";
    }

    void stmt(const ast::Stmt& s) {
        std::visit(ast::overloaded{
                       [&](const ast::VarDecl& v) {
                           line_start();
                           out_ << type(v.type) << " " << v.name << " = " << expr(*v.init)
                                << ";\n";
                       },
                       [&](const ast::Assign& a) {
                           line_start();
                           out_ << expr(*a.target) << " = " << expr(*a.value) << ";\n";
                       },
                       [&](const ast::If& n) {
                           line_start();
                           out_ << "if (" << expr(*n.cond) << ")\n";
                           nested(*n.thenBranch);
                           if (n.elseBranch) {
                               line_start();
                               out_ << "else\n";
                               nested(*n.elseBranch);
                           }
                       },
                       [&](const ast::While& n) {
                           line_start();
                           out_ << "while (" << expr(*n.cond) << ")\n";
                           nested(*n.body);
                       },
                       [&](const ast::Return& r) {
                           line_start();
                           out_ << "return";
                           if (r.value) out_ << " " << expr(*r.value);
                           out_ << ";\n";
                       },
                       [&](const ast::ExprStmt& e) {
                           line_start();
                           out_ << expr(*e.expr) << ";\n";
                       },
                       [&](const ast::Block& b) {
                           line_start();
                           block(b);
                           out_ << "\n";
                       },
                   },
                   s.node);
    }

    void nested(const ast::Stmt& s) {
        indent_++;
        stmt(s);
        indent_--;
    }

    std::string expr(const ast::Expr& e) {
        return std::visit(
            ast::overloaded{
                [&](const ast::IntLit& n) { return std::to_string(n.value); },
                [&](const ast::FloatLit& n) {
                    std::ostringstream os;
                    os.precision(17);
                    os << n.value;
                    std::string s = os.str();
                    if (s.find('.') == std::string::npos &&
                        s.find('e') == std::string::npos)
                        s += ".0";
                    return s;
                },
                [&](const ast::StrLit& n) {
                    std::string s = "\"";
                    for (char c : n.value) {
                        switch (c) {
                            case '\n': s += "\\n"; break;
                            case '\t': s += "\\t"; break;
                            case '\r': s += "\\r"; break;
                            case '\\': s += "\\\\"; break;
                            case '"': s += "\\\""; break;
                            default: s += c;
                        }
                    }
                    return s + "\"";
                },
                [&](const ast::BoolLit& n) {
                    return std::string(n.value ? "true" : "false");
                },
                [&](const ast::Ident& n) { return n.name; },
                [&](const ast::FieldAccess& n) {
                    return expr(*n.base) + "." + n.name;
                },
                [&](const ast::MethodCall& n) {
                    return expr(*n.base) + "." + n.name + args(n.args);
                },
                [&](const ast::Call& n) { return n.name + args(n.args); },
                [&](const ast::SuperCall& n) {
                    return "super." + n.name + args(n.args);
                },
                [&](const ast::SubCall& n) { return "sub." + n.name + args(n.args); },
                [&](const ast::ThisExpr&) { return std::string("this"); },
                [&](const ast::ValueKeyword&) { return std::string("value"); },
                [&](const ast::NewExpr& n) {
                    std::string s = "new " + n.conceptName + args(n.args);
                    if (n.parent) s += " in " + expr(*n.parent);
                    return s;
                },
                [&](const ast::Unary& n) {
                    return std::string("(") + (n.op == ast::Unary::Op::Neg ? "-" : "!") +
                           expr(*n.operand) + ")";
                },
                [&](const ast::Binary& n) {
                    return "(" + expr(*n.lhs) + " " + op_text(n.op) + " " + expr(*n.rhs) +
                           ")";
                },
            },
            e.node);
    }

    std::string args(const std::vector<ast::ExprPtr>& xs) {
        std::string s = "(";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i) s += ", ";
            s += expr(*xs[i]);
        }
        return s + ")";
    }

    static const char* op_text(ast::Binary::Op op) {
        using Op = ast::Binary::Op;
        switch (op) {
            case Op::Or: return "||";
            case Op::And: return "&&";
            case Op::Eq: return "==";
            case Op::Ne: return "!=";
            case Op::Lt: return "<";
            case Op::Le: return "<=";
            case Op::Gt: return ">";
            case Op::Ge: return ">=";
            case Op::Add: return "+";
            case Op::Sub: return "-";
            case Op::Mul: return "*";
            case Op::Div: return "/";
            case Op::Mod: return "%";
        }
        return "?";
    }
};

}  // namespace detail

inline std::string print_program(const ast::Program& p) {
    return detail::AstPrinter().print(p);
}

}  // namespace copl
