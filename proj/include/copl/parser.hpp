#pragma once

#include <charconv>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "copl/ast.hpp"
#include "copl/lexer.hpp"
#include "copl/token.hpp"

namespace copl {

namespace detail {

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    ast::Program run() {
        ast::Program prog;
        while (cur().is_kw("concept")) prog.concepts.push_back(concept_decl());
        while (!at_end()) prog.statements.push_back(statement());
        return prog;
    }

private:
    std::vector<Token> toks_;
    std::size_t i_ = 0;

    const Token& cur() const { return toks_[i_]; }
    const Token& peek(std::size_t ahead) const {
        std::size_t j = i_ + ahead;
        return j < toks_.size() ? toks_[j] : toks_.back();
    }
    bool at_end() const { return cur().kind == TokenKind::EndOfInput; }
    Token advance() { return toks_[i_++]; }

    [[noreturn]] void fail(const std::string& expected) const {
        const Token& t = cur();
        std::string found = t.kind == TokenKind::EndOfInput
                                ? "end of input"
                                : "'" + t.lexeme + "'";
        throw Error(ErrorKind::ParseError, t.pos,
                    "expected " + expected + ", found " + found);
    }

    Token expect_punct(std::string_view p) {
        if (!cur().is_punct(p)) fail("'" + std::string(p) + "'");
        return advance();
    }
    Token expect_kw(std::string_view kw) {
        if (!cur().is_kw(kw)) fail("'" + std::string(kw) + "'");
        return advance();
    }
    Token expect_ident() {
        if (cur().kind != TokenKind::Identifier) fail("an identifier");
        return advance();
    }
    bool accept_punct(std::string_view p) {
        if (cur().is_punct(p)) {
            advance();
            return true;
        }
        return false;
    }

    // --- declarations ---

    ast::ConceptDecl concept_decl() {
        ast::ConceptDecl decl;
        decl.pos = cur().pos;
        expect_kw("concept");
        decl.name = expect_ident().lexeme;
        if (cur().is_kw("in")) {
            advance();
            const Token& p = cur();
            decl.parentPos = p.pos;
            decl.parentName = expect_ident().lexeme;
        }
        expect_punct("{");
        while (!cur().is_punct("}")) decl.members.push_back(member());
        expect_punct("}");
        return decl;
    }

    ast::Member member() {
        if (cur().is_kw("in") || cur().is_kw("out")) {
            bool isOut = cur().is_kw("out");
            Pos pos = advance().pos;
            ast::TypeRef type = type_ref();
            std::string name = expect_ident().lexeme;
            if (cur().is_punct("(")) {
                ast::MethodDecl m;
                m.direction = isOut ? ast::Direction::Out : ast::Direction::In;
                m.returnType = std::move(type);
                m.name = std::move(name);
                m.pos = pos;
                advance();
                if (!cur().is_punct(")")) {
                    for (;;) {
                        ast::Param p;
                        p.pos = cur().pos;
                        p.type = type_ref();
                        p.name = expect_ident().lexeme;
                        m.params.push_back(std::move(p));
                        if (!accept_punct(",")) break;
                    }
                }
                expect_punct(")");
                m.body = block_body();
                return ast::Member{std::move(m)};
            }
            if (!isOut) fail("'('");
            ast::PropertyDecl p;
            p.type = std::move(type);
            p.name = std::move(name);
            p.pos = pos;
            if (accept_punct(";")) return ast::Member{std::move(p)};
            expect_punct("{");
            if (cur().is_kw("get")) {
                advance();
                p.getBody = block_body();
            }
            if (cur().is_kw("set")) {
                advance();
                p.setBody = block_body();
            }
            expect_punct("}");
            return ast::Member{std::move(p)};
        }
        ast::FieldDecl f;
        f.pos = cur().pos;
        f.type = type_ref();
        f.name = expect_ident().lexeme;
        expect_punct(";");
        return ast::Member{std::move(f)};
    }

    ast::TypeRef type_ref() {
        ast::TypeRef t;
        t.pos = cur().pos;
        if (cur().is_kw("int")) {
            t.kind = ast::TypeRef::Kind::Int;
            advance();
        } else if (cur().is_kw("double")) {
            t.kind = ast::TypeRef::Kind::Double;
            advance();
        } else if (cur().is_kw("bool")) {
            t.kind = ast::TypeRef::Kind::Bool;
            advance();
        } else if (cur().is_kw("string")) {
            t.kind = ast::TypeRef::Kind::Str;
            advance();
        } else if (cur().is_kw("void")) {
            t.kind = ast::TypeRef::Kind::Void;
            advance();
        } else if (cur().is_kw("char")) {
            advance();
            expect_punct("[");
            if (cur().kind != TokenKind::IntLiteral) fail("an integer length");
            t.kind = ast::TypeRef::Kind::CharArray;
            t.charLen = static_cast<int>(int_value(advance()));
            expect_punct("]");
        } else if (cur().kind == TokenKind::Identifier) {
            t.kind = ast::TypeRef::Kind::Named;
            t.name = advance().lexeme;
        } else {
            fail("a type");
        }
        return t;
    }

    bool starts_type() const {
        return cur().is_kw("int") || cur().is_kw("double") || cur().is_kw("bool") ||
               cur().is_kw("string") || cur().is_kw("void") || cur().is_kw("char");
    }

    // --- statements ---

    ast::Block block_body() {
        expect_punct("{");
        ast::Block b;
        while (!cur().is_punct("}")) b.statements.push_back(statement());
        expect_punct("}");
        return b;
    }

    ast::StmtPtr statement() {
        Pos pos = cur().pos;
        if (cur().is_punct("{")) {
            ast::Block b = block_body();
            return make_stmt(pos, std::move(b));
        }
        if (cur().is_kw("if")) return if_stmt();
        if (cur().is_kw("while")) return while_stmt();
        if (cur().is_kw("return")) {
            advance();
            ast::Return r;
            if (!cur().is_punct(";")) r.value = expr();
            expect_punct(";");
            return make_stmt(pos, std::move(r));
        }
        if (starts_type() ||
            (cur().kind == TokenKind::Identifier && peek(1).kind == TokenKind::Identifier)) {
            ast::VarDecl v;
            v.type = type_ref();
            v.name = expect_ident().lexeme;
            expect_punct("=");
            v.init = expr();
            expect_punct(";");
            return make_stmt(pos, std::move(v));
        }
        ast::ExprPtr e = expr();
        if (accept_punct("=")) {
            if (!std::holds_alternative<ast::Ident>(e->node) &&
                !std::holds_alternative<ast::FieldAccess>(e->node))
                throw Error(ErrorKind::ParseError, e->pos,
                            "invalid assignment target");
            ast::Assign a;
            a.target = std::move(e);
            a.value = expr();
            expect_punct(";");
            return make_stmt(pos, std::move(a));
        }
        expect_punct(";");
        ast::ExprStmt s;
        s.expr = std::move(e);
        return make_stmt(pos, std::move(s));
    }

    ast::StmtPtr if_stmt() {
        Pos pos = cur().pos;
        expect_kw("if");
        expect_punct("(");
        ast::If node;
        node.cond = expr();
        expect_punct(")");
        node.thenBranch = statement();
        if (cur().is_kw("else")) {
            advance();
            node.elseBranch = statement();
        }
        return make_stmt(pos, std::move(node));
    }

    ast::StmtPtr while_stmt() {
        Pos pos = cur().pos;
        expect_kw("while");
        expect_punct("(");
        ast::While node;
        node.cond = expr();
        expect_punct(")");
        node.body = statement();
        return make_stmt(pos, std::move(node));
    }

    // --- expressions ---

    ast::ExprPtr expr() { return or_expr(); }

    ast::ExprPtr or_expr() {
        ast::ExprPtr lhs = and_expr();
        while (cur().is_punct("||")) {
            Pos pos = lhs->pos;
            advance();
            lhs = make_binary(pos, ast::Binary::Op::Or, std::move(lhs), and_expr());
        }
        return lhs;
    }
    ast::ExprPtr and_expr() {
        ast::ExprPtr lhs = eq_expr();
        while (cur().is_punct("&&")) {
            Pos pos = lhs->pos;
            advance();
            lhs = make_binary(pos, ast::Binary::Op::And, std::move(lhs), eq_expr());
        }
        return lhs;
    }
    ast::ExprPtr eq_expr() {
        ast::ExprPtr lhs = rel_expr();
        for (;;) {
            if (cur().is_punct("==")) {
                Pos pos = lhs->pos;
                advance();
                lhs = make_binary(pos, ast::Binary::Op::Eq, std::move(lhs), rel_expr());
            } else if (cur().is_punct("!=")) {
                Pos pos = lhs->pos;
                advance();
                lhs = make_binary(pos, ast::Binary::Op::Ne, std::move(lhs), rel_expr());
            } else {
                return lhs;
            }
        }
    }
    ast::ExprPtr rel_expr() {
        ast::ExprPtr lhs = add_expr();
        for (;;) {
            ast::Binary::Op op;
            if (cur().is_punct("<"))
                op = ast::Binary::Op::Lt;
            else if (cur().is_punct("<="))
                op = ast::Binary::Op::Le;
            else if (cur().is_punct(">"))
                op = ast::Binary::Op::Gt;
            else if (cur().is_punct(">="))
                op = ast::Binary::Op::Ge;
            else
                return lhs;
            Pos pos = lhs->pos;
            advance();
            lhs = make_binary(pos, op, std::move(lhs), add_expr());
        }
    }
    ast::ExprPtr add_expr() {
        ast::ExprPtr lhs = mul_expr();
        for (;;) {
            ast::Binary::Op op;
            if (cur().is_punct("+"))
                op = ast::Binary::Op::Add;
            else if (cur().is_punct("-"))
                op = ast::Binary::Op::Sub;
            else
                return lhs;
            Pos pos = lhs->pos;
            advance();
            lhs = make_binary(pos, op, std::move(lhs), mul_expr());
        }
    }
    ast::ExprPtr mul_expr() {
        ast::ExprPtr lhs = unary_expr();
        for (;;) {
            ast::Binary::Op op;
            if (cur().is_punct("*"))
                op = ast::Binary::Op::Mul;
            else if (cur().is_punct("/"))
                op = ast::Binary::Op::Div;
            else if (cur().is_punct("%"))
                op = ast::Binary::Op::Mod;
            else
                return lhs;
            Pos pos = lhs->pos;
            advance();
            lhs = make_binary(pos, op, std::move(lhs), unary_expr());
        }
    }
    ast::ExprPtr unary_expr() {
        if (cur().is_punct("-") || cur().is_punct("!")) {
            ast::Unary u;
            u.op = cur().is_punct("-") ? ast::Unary::Op::Neg : ast::Unary::Op::Not;
            Pos pos = advance().pos;
            u.operand = unary_expr();
            return make_expr(pos, std::move(u));
        }
        return postfix_expr();
    }

    ast::ExprPtr postfix_expr() {
        ast::ExprPtr e = primary();
        while (cur().is_punct(".")) {
            Pos pos = e->pos;
            advance();
            std::string name = expect_ident().lexeme;
            if (cur().is_punct("(")) {
                ast::MethodCall call;
                call.base = std::move(e);
                call.name = std::move(name);
                call.args = arg_list();
                e = make_expr(pos, std::move(call));
            } else {
                ast::FieldAccess fa;
                fa.base = std::move(e);
                fa.name = std::move(name);
                e = make_expr(pos, std::move(fa));
            }
        }
        return e;
    }

    std::vector<ast::ExprPtr> arg_list() {
        expect_punct("(");
        std::vector<ast::ExprPtr> args;
        if (!cur().is_punct(")")) {
            for (;;) {
                args.push_back(expr());
                if (!accept_punct(",")) break;
            }
        }
        expect_punct(")");
        return args;
    }

    ast::ExprPtr primary() {
        const Token& t = cur();
        Pos pos = t.pos;
        switch (t.kind) {
            case TokenKind::IntLiteral:
                return make_expr(pos, ast::IntLit{int_value(advance())});
            case TokenKind::FloatLiteral: {
                double v = std::stod(advance().lexeme);
                return make_expr(pos, ast::FloatLit{v});
            }
            case TokenKind::StringLiteral:
                return make_expr(pos, ast::StrLit{advance().strValue});
            case TokenKind::Identifier: {
                std::string name = advance().lexeme;
                if (cur().is_punct("(")) {
                    ast::Call c;
                    c.name = std::move(name);
                    c.args = arg_list();
                    return make_expr(pos, std::move(c));
                }
                return make_expr(pos, ast::Ident{std::move(name)});
            }
            default:
                break;
        }
        if (t.is_kw("true") || t.is_kw("false")) {
            bool v = advance().lexeme == "true";
            return make_expr(pos, ast::BoolLit{v});
        }
        if (t.is_kw("this")) {
            advance();
            return make_expr(pos, ast::ThisExpr{});
        }
        if (t.is_kw("value")) {
            advance();
            return make_expr(pos, ast::ValueKeyword{});
        }
        if (t.is_kw("super") || t.is_kw("sub")) {
            bool isSuper = t.lexeme == "super";
            advance();
            expect_punct(".");
            std::string name = expect_ident().lexeme;
            std::vector<ast::ExprPtr> args = arg_list();
            if (isSuper)
                return make_expr(pos, ast::SuperCall{std::move(name), std::move(args)});
            return make_expr(pos, ast::SubCall{std::move(name), std::move(args)});
        }
        if (t.is_kw("new")) {
            advance();
            ast::NewExpr n;
            n.conceptName = expect_ident().lexeme;
            n.args = arg_list();
            if (cur().is_kw("in")) {
                advance();
                n.parent = expr();
            }
            return make_expr(pos, std::move(n));
        }
        if (t.is_punct("(")) {
            advance();
            ast::ExprPtr e = expr();
            expect_punct(")");
            return e;
        }
        fail("an expression");
    }

    // --- helpers ---

    std::int64_t int_value(const Token& t) {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(t.lexeme.data(), t.lexeme.data() + t.lexeme.size(), v);
        if (ec != std::errc() || p != t.lexeme.data() + t.lexeme.size())
            throw Error(ErrorKind::ParseError, t.pos, "integer literal out of range");
        return v;
    }

    template <class Node>
    static ast::ExprPtr make_expr(Pos pos, Node&& node) {
        auto e = std::make_unique<ast::Expr>();
        e->pos = pos;
        e->node = std::forward<Node>(node);
        return e;
    }
    template <class Node>
    static ast::StmtPtr make_stmt(Pos pos, Node&& node) {
        auto s = std::make_unique<ast::Stmt>();
        s->pos = pos;
        s->node = std::forward<Node>(node);
        return s;
    }
    static ast::ExprPtr make_binary(Pos pos, ast::Binary::Op op, ast::ExprPtr lhs,
                                    ast::ExprPtr rhs) {
        ast::Binary b;
        b.op = op;
        b.lhs = std::move(lhs);
        b.rhs = std::move(rhs);
        return make_expr(pos, std::move(b));
    }
};

}  // namespace detail

inline ast::Program parse(std::vector<Token> tokens) {
    return detail::Parser(std::move(tokens)).run();
}

inline ast::Program parse_source(std::string_view source) {
    return parse(tokenize(source));
}

}  // namespace copl
