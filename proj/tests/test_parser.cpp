#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "copl/ast_printer.hpp"
#include "copl/parser.hpp"
#include "support/helpers.hpp"

using namespace copl;

TEST_CASE("concept with parent and char field") {
    ast::Program p = parse_source("concept Account in Bank { char[10] accNo; }");
    REQUIRE(p.concepts.size() == 1);
    const ast::ConceptDecl& c = p.concepts[0];
    CHECK(c.name == "Account");
    REQUIRE(c.parentName);
    CHECK(*c.parentName == "Bank");
    REQUIRE(c.members.size() == 1);
    const auto& f = std::get<ast::FieldDecl>(c.members[0].node);
    CHECK(f.name == "accNo");
    CHECK(f.type.kind == ast::TypeRef::Kind::CharArray);
    CHECK(f.type.charLen == 10);
}

TEST_CASE("property with explicit getter") {
    ast::Program p = parse_source(
        "concept Account { out double balance { get { return 0.0; } } }");
    const auto& prop = std::get<ast::PropertyDecl>(p.concepts[0].members[0].node);
    CHECK(prop.name == "balance");
    CHECK(prop.getBody.has_value());
    CHECK_FALSE(prop.setBody.has_value());
    CHECK_FALSE(prop.is_auto());
}

TEST_CASE("auto property has neither accessor body") {
    ast::Program p = parse_source("concept A { out double balance; }");
    const auto& prop = std::get<ast::PropertyDecl>(p.concepts[0].members[0].node);
    CHECK(prop.is_auto());
}

TEST_CASE("self-inclusion is not a parse error") {
    ast::Program p = parse_source("concept A in A { }");
    CHECK(p.concepts.size() == 1);
}

TEST_CASE("method declarations carry an explicit direction") {
    ast::Program p = parse_source(
        "concept A { in void m() { } out int n(int k, double d) { } }");
    const auto& m = std::get<ast::MethodDecl>(p.concepts[0].members[0].node);
    CHECK(m.direction == ast::Direction::In);
    const auto& n = std::get<ast::MethodDecl>(p.concepts[0].members[1].node);
    CHECK(n.direction == ast::Direction::Out);
    REQUIRE(n.params.size() == 2);
    CHECK(n.params[1].name == "d");
}

TEST_CASE("an 'in' member must be a method") {
    CHECK(test::compile_error_kind("concept A { in double balance; }") ==
          ErrorKind::ParseError);
}

TEST_CASE("new with and without a parent clause") {
    ast::Program p = parse_source("Bank b = new Bank(\"B\");\nAccount a = new Account() in b;");
    const auto& v1 = std::get<ast::VarDecl>(p.statements[0]->node);
    const auto& n1 = std::get<ast::NewExpr>(v1.init->node);
    CHECK(n1.conceptName == "Bank");
    CHECK(n1.parent == nullptr);
    const auto& v2 = std::get<ast::VarDecl>(p.statements[1]->node);
    const auto& n2 = std::get<ast::NewExpr>(v2.init->node);
    REQUIRE(n2.parent != nullptr);
}

TEST_CASE("precedence builds the usual tree") {
    ast::Program p = parse_source("int x = 1 + 2 * 3;");
    const auto& v = std::get<ast::VarDecl>(p.statements[0]->node);
    const auto& add = std::get<ast::Binary>(v.init->node);
    CHECK(add.op == ast::Binary::Op::Add);
    const auto& mul = std::get<ast::Binary>(add.rhs->node);
    CHECK(mul.op == ast::Binary::Op::Mul);
}

TEST_CASE("assignment target must be a name or field path") {
    CHECK(test::compile_error_kind("1 + 2 = 3;") == ErrorKind::ParseError);
    CHECK(test::compile_error_kind("f() = 3;") == ErrorKind::ParseError);
}

TEST_CASE("first parse error aborts with expected/found") {
    try {
        parse_source("concept A { int ; }");
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ParseError);
        CHECK(std::string(e.what()).find("expected") != std::string::npos);
    }
}

// The canonical printer is the structural-equality oracle: printing, then
// reparsing, then printing again must reproduce the exact text.
TEST_CASE("printer round-trip over the conformance corpus") {
    for (const std::string& name : test::corpus_program_names()) {
        std::string source = test::read_file(std::string(CORPUS_DIR) + "/" + name + ".cop");
        REQUIRE_FALSE(source.empty());
        ast::Program first = parse_source(source);
        std::string printed = print_program(first);
        ast::Program second = parse_source(printed);
        CHECK(print_program(second) == printed);
    }
}

// Any parse error produced from a mutated valid program reports a position
// within the source bounds.
TEST_CASE("mutated programs report in-bounds error positions") {
    std::mt19937 rng(7);
    for (const std::string& name : test::corpus_program_names()) {
        std::string source = test::read_file(std::string(CORPUS_DIR) + "/" + name + ".cop");
        for (int trial = 0; trial < 40; ++trial) {
            std::string mutated = source;
            std::uniform_int_distribution<std::size_t> at(0, mutated.size() - 1);
            switch (trial % 4) {
                case 0: mutated.erase(at(rng), 1); break;
                case 1: mutated.insert(at(rng), "}"); break;
                case 2: mutated.insert(at(rng), "("); break;
                case 3: mutated[at(rng)] = ';'; break;
            }
            int lines = 1;
            for (char ch : mutated)
                if (ch == '\n') lines++;
            try {
                parse_source(mutated);
            } catch (const Error& e) {
                CHECK(e.pos().line >= 1);
                CHECK(e.pos().line <= lines + 1);
                CHECK(e.pos().col >= 1);
            }
        }
    }
}
