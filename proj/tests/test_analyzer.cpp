#include <catch2/catch_amalgamated.hpp>

#include "copl/analyzer.hpp"
#include "copl/parser.hpp"
#include "support/helpers.hpp"

using namespace copl;

namespace {

const char* kBankChain = R"(
concept Bank in MemoryHandle {
    char[12] bankCode;
}

concept Account in Bank {
    char[10] accNo;
}

concept BonusAccount in Account {
    out double bonus;
}
)";

std::vector<std::string> chain_names(const ConceptInfo& c) {
    std::vector<std::string> out;
    for (const ConceptInfo* link : inclusion_chain(c)) out.push_back(link->name);
    return out;
}

}  // namespace

TEST_CASE("inclusion chains run from the outermost ancestor to the concept") {
    ast::Program prog = parse_source(kBankChain);
    ProgramModel model = resolve(prog);
    CHECK(chain_names(*model.find_concept("Bank")) == std::vector<std::string>{"Bank"});
    CHECK(chain_names(*model.find_concept("Account")) ==
          std::vector<std::string>{"Bank", "Account"});
    CHECK(chain_names(*model.find_concept("BonusAccount")) ==
          std::vector<std::string>{"Bank", "Account", "BonusAccount"});
}

TEST_CASE("chain of a child is the parent's chain plus itself") {
    ast::Program prog = parse_source(kBankChain);
    ProgramModel model = resolve(prog);
    for (const auto& [name, c] : model.concepts) {
        if (c->parentKind != ConceptInfo::ParentKind::Concept) continue;
        std::vector<const ConceptInfo*> expectation = c->parent->chain;
        expectation.push_back(c.get());
        CHECK(inclusion_chain(*c) == expectation);
    }
}

TEST_CASE("field chaining across the inclusion hierarchy") {
    ast::Program prog = parse_source(
        "concept Point { int x; int y; }\n"
        "concept Point3D in Point { int z; }\n");
    ProgramModel model = resolve(prog);
    const ConceptInfo* p3 = model.find_concept("Point3D");
    std::vector<std::string> chained;
    for (const ConceptInfo* link : inclusion_chain(*p3))
        for (const FieldInfo& f : link->fields) chained.push_back(f.name);
    CHECK(chained == std::vector<std::string>{"x", "y", "z"});
    CHECK_FALSE(p3->instantiable);  // the chain roots at a value-only concept
}

TEST_CASE("value-only concepts are flagged non-instantiable") {
    ast::Program prog = parse_source(kBankChain);
    ProgramModel model = resolve(prog);
    CHECK(model.find_concept("Bank")->instantiable);
    CHECK(model.find_concept("BonusAccount")->instantiable);
    ast::Program prog2 = parse_source("concept Person { string name; }");
    ProgramModel model2 = resolve(prog2);
    CHECK_FALSE(model2.find_concept("Person")->instantiable);
}

TEST_CASE("inclusion cycles are rejected") {
    CHECK(test::compile_error_kind("concept A in B {}\nconcept B in A {}") ==
          ErrorKind::InclusionCycle);
    CHECK(test::compile_error_kind("concept A in A {}") == ErrorKind::InclusionCycle);
}

TEST_CASE("unknown parent is rejected") {
    try {
        compile_source("concept A in B {}");
        FAIL("expected a resolve error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownParent);
        CHECK(std::string(e.what()).find("'B'") != std::string::npos);
    }
}

TEST_CASE("dual methods must share one signature") {
    CHECK(test::compile_error_kind("concept A {\n"
                                   "    in double getBalance() { return 0.0; }\n"
                                   "    out int getBalance() { return 0; }\n"
                                   "}") == ErrorKind::DualSignatureMismatch);
    CHECK(test::compile_error_kind("concept A {\n"
                                   "    in int m(int a) { return 0; }\n"
                                   "    out int m(double a) { return 0; }\n"
                                   "}") == ErrorKind::DualSignatureMismatch);
    // identical signatures are the dual-method mechanism, not an error
    CHECK_NOTHROW(compile_source("concept A {\n"
                                 "    in int m(int a) { return 0; }\n"
                                 "    out int m(int b) { return 1; }\n"
                                 "}"));
}

TEST_CASE("fields, methods and properties share one namespace") {
    CHECK(test::compile_error_kind("concept A { int x; out double x; }") ==
          ErrorKind::DuplicateMember);
    CHECK(test::compile_error_kind("concept A { int x; in int x() { return 0; } }") ==
          ErrorKind::DuplicateMember);
    CHECK(test::compile_error_kind(
              "concept A { in int m() { return 0; } in int m() { return 1; } }") ==
          ErrorKind::DuplicateMember);
}

TEST_CASE("duplicate and reserved concept names") {
    CHECK(test::compile_error_kind("concept A {}\nconcept A {}") ==
          ErrorKind::DuplicateConcept);
    CHECK(test::compile_error_kind("concept MemoryHandle {}") ==
          ErrorKind::DuplicateConcept);
}

TEST_CASE("type names must resolve") {
    CHECK(test::compile_error_kind("concept A { Missing f; }") == ErrorKind::UnknownType);
    CHECK(test::compile_error_kind("concept A { in void m() { Missing x = 1; } }") ==
          ErrorKind::UnknownType);
    CHECK(test::compile_error_kind("Missing x = 1;") == ErrorKind::UnknownType);
    CHECK(test::compile_error_kind("concept A { char[0] f; }") ==
          ErrorKind::BadCharArraySize);
}

TEST_CASE("forward references to later concepts resolve") {
    CHECK_NOTHROW(compile_source("concept Account in Bank { char[10] accNo; }\n"
                                 "concept Bank in MemoryHandle { char[12] code; }"));
}

TEST_CASE("resolve is deterministic") {
    auto snapshot = [](const ProgramModel& m) {
        std::string s;
        for (const auto& [name, c] : m.concepts) {
            s += name + ":";
            for (const ConceptInfo* link : c->chain) s += link->name + ",";
            for (const FieldInfo& f : c->fields) s += f.name + "|" + type_name(f.type);
            for (const auto& [mn, mi] : c->inMethods) s += "+in " + mn;
            for (const auto& [mn, mi] : c->outMethods) s += "+out " + mn;
            for (const auto& [pn, pi] : c->properties) s += "+prop " + pn;
            s += ";";
        }
        return s;
    };
    std::string source = test::read_file(std::string(CORPUS_DIR) + "/point_bonus.cop");
    ast::Program p1 = parse_source(source);
    ast::Program p2 = parse_source(source);
    CHECK(snapshot(resolve(p1)) == snapshot(resolve(p2)));
}

TEST_CASE("every corpus program resolves") {
    for (const std::string& name : test::corpus_program_names()) {
        std::string source = test::read_file(std::string(CORPUS_DIR) + "/" + name + ".cop");
        CHECK_NOTHROW(compile_source(source));
    }
}
