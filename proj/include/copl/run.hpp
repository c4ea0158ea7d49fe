#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "copl/analyzer.hpp"
#include "copl/interp.hpp"
#include "copl/parser.hpp"

namespace copl {

// The model borrows from the AST, so both travel together.
struct CompiledProgram {
    std::unique_ptr<ast::Program> ast;
    ProgramModel model;
};

// tokenize -> parse -> resolve; throws Error on any failure.
inline CompiledProgram compile_source(std::string_view source) {
    CompiledProgram cp;
    cp.ast = std::make_unique<ast::Program>(parse_source(source));
    cp.model = resolve(*cp.ast);
    return cp;
}

// Convenience wrapper for tests: full pipeline plus execution.
inline ExecutionOutcome run_source(std::string_view source, const RunOptions& opts = {}) {
    CompiledProgram cp = compile_source(source);
    return run_program(cp.model, opts);
}

}  // namespace copl
