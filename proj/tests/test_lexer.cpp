#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "copl/lexer.hpp"

using namespace copl;

namespace {

std::vector<std::string> lexemes(const std::vector<Token>& toks) {
    std::vector<std::string> out;
    for (const Token& t : toks) out.push_back(t.lexeme);
    return out;
}

}  // namespace

TEST_CASE("field declaration tokens") {
    auto toks = tokenize("char[10] accNo;");
    REQUIRE(toks.size() == 7);
    CHECK(toks[0].kind == TokenKind::Keyword);
    CHECK(toks[0].lexeme == "char");
    CHECK(toks[1].is_punct("["));
    CHECK(toks[2].kind == TokenKind::IntLiteral);
    CHECK(toks[2].lexeme == "10");
    CHECK(toks[3].is_punct("]"));
    CHECK(toks[4].kind == TokenKind::Identifier);
    CHECK(toks[4].lexeme == "accNo");
    CHECK(toks[5].is_punct(";"));
    CHECK(toks[6].kind == TokenKind::EndOfInput);
}

TEST_CASE("empty input yields only end-of-input") {
    auto toks = tokenize("");
    REQUIRE(toks.size() == 1);
    CHECK(toks[0].kind == TokenKind::EndOfInput);
}

TEST_CASE("unterminated string") {
    try {
        tokenize("\"abc");
        FAIL("expected a lex error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::LexError);
        CHECK(e.pos().line == 1);
    }
}

TEST_CASE("unterminated block comment") {
    CHECK_THROWS_AS(tokenize("int x; /* no end"), Error);
}

TEST_CASE("character outside the alphabet") {
    try {
        tokenize("int x = 1 @ 2;");
        FAIL("expected a lex error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::LexError);
        CHECK(e.pos().col == 11);
    }
}

TEST_CASE("comments and whitespace are discarded") {
    auto toks = tokenize("// line comment\nint /* inner */ x;  // tail");
    auto lex = lexemes(toks);
    REQUIRE(lex.size() == 4);
    CHECK(lex[0] == "int");
    CHECK(lex[1] == "x");
    CHECK(lex[2] == ";");
}

TEST_CASE("string escapes decode; lexeme keeps the raw slice") {
    auto toks = tokenize("\"a\\n\\\"b\"");
    REQUIRE(toks[0].kind == TokenKind::StringLiteral);
    CHECK(toks[0].strValue == "a\n\"b");
    CHECK(toks[0].lexeme == "\"a\\n\\\"b\"");
}

TEST_CASE("keywords are exactly the language's word set") {
    for (const char* kw :
         {"concept", "in", "out", "super", "sub", "this", "new", "get", "set",
          "value", "if", "else", "while", "return", "true", "false", "void",
          "int", "double", "bool", "string", "char"}) {
        auto toks = tokenize(kw);
        CHECK(toks[0].kind == TokenKind::Keyword);
    }
    CHECK(tokenize("values")[0].kind == TokenKind::Identifier);
    CHECK(tokenize("Concept")[0].kind == TokenKind::Identifier);
}

TEST_CASE("positions are 1-based and monotonically non-decreasing") {
    auto toks = tokenize("concept A {\n  int x;\n}\n");
    CHECK(toks[0].pos.line == 1);
    CHECK(toks[0].pos.col == 1);
    Pos prev{1, 1};
    for (const Token& t : toks) {
        bool ordered = t.pos.line > prev.line ||
                       (t.pos.line == prev.line && t.pos.col >= prev.col);
        CHECK(ordered);
        prev = t.pos;
    }
}

TEST_CASE("float and int literals") {
    auto toks = tokenize("100.0 42 0.03");
    CHECK(toks[0].kind == TokenKind::FloatLiteral);
    CHECK(toks[1].kind == TokenKind::IntLiteral);
    CHECK(toks[2].kind == TokenKind::FloatLiteral);
    CHECK(toks[2].lexeme == "0.03");
}

// Concatenating any two token lexemes with a space between lexes back to the
// same two tokens.
TEST_CASE("tokenize is total on its alphabet: pairwise concatenation") {
    const char* sample =
        "concept Account in Bank { char[10] accNo; out double balance; }\n"
        "Account a = new Account(\"x\") in b; print(a.balance + 1.5 * 2);\n"
        "if (a == b && !c || x <= 3 % 2) { return; } value super sub this";
    auto base = tokenize(sample);
    base.pop_back();  // drop end-of-input
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<std::size_t> pick(0, base.size() - 1);
    for (int i = 0; i < 500; ++i) {
        const Token& a = base[pick(rng)];
        const Token& b = base[pick(rng)];
        auto re = tokenize(a.lexeme + " " + b.lexeme);
        REQUIRE(re.size() == 3);
        CHECK(re[0].kind == a.kind);
        CHECK(re[0].lexeme == a.lexeme);
        CHECK(re[1].kind == b.kind);
        CHECK(re[1].lexeme == b.lexeme);
    }
}
