#pragma once

#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "copl/analyzer.hpp"
#include "copl/format.hpp"
#include "copl/interp.hpp"
#include "copl/parser.hpp"

namespace copl {

// Interactive session over one persistent model, store and script scope.
// Inputs accumulate concept declarations and statements; `:quit` leaves,
// `:trace on|off` toggles trace output on the error stream.
class Repl {
public:
    Repl(std::istream& in, std::ostream& out, std::ostream& err,
         RunOptions opts = {}, bool showPrompt = false)
        : in_(in),
          out_(out),
          err_(err),
          trace_(opts.trace),
          showPrompt_(showPrompt),
          evaluator_(model_, opts) {
        evaluator_.set_live_output(&out_);
        evaluator_.set_trace_listener([this](const TraceEvent& e) {
            if (trace_) err_ << format_trace_event(e) << "\n";
        });
    }

    int run() {
        std::string input;
        while (read_input(input)) {
            if (!input.empty() && input[0] == ':') {
                if (!command(input)) return 0;
                continue;
            }
            feed(input);
        }
        return 0;
    }

    // Parses and executes one complete input chunk; diagnostics are printed,
    // the session survives every error. A bare expression gets its ';'
    // supplied, so `1+1` works as an input.
    void feed(std::string input) {
        std::size_t end = input.find_last_not_of(" \t\r\n");
        if (end == std::string::npos) return;
        input.resize(end + 1);
        if (input.back() != ';' && input.back() != '}') input += ';';
        std::unique_ptr<ast::Program> prog;
        try {
            prog = std::make_unique<ast::Program>(parse_source(input));
            merge_program(model_, *prog);
        } catch (const Error& e) {
            diagnose(e);
            return;
        }
        try {
            for (const auto& s : prog->statements) {
                if (const auto* es = std::get_if<ast::ExprStmt>(&s->node)) {
                    Value v = evaluator_.eval_script_expr(*es->expr);
                    if (!v.is_void()) out_ << format_value(v) << "\n";
                } else if (!evaluator_.exec_script_stmt(*s)) {
                    break;  // top-level return ends this input
                }
            }
        } catch (const Error& e) {
            diagnose(e);
        }
        // executed statements may hold references into this AST
        history_.push_back(std::move(prog));
        out_.flush();
    }

private:
    std::istream& in_;
    std::ostream& out_;
    std::ostream& err_;
    bool trace_;
    bool showPrompt_;
    ProgramModel model_;
    std::vector<std::unique_ptr<ast::Program>> history_;
    Evaluator evaluator_;

    void diagnose(const Error& e) {
        err_ << "repl:" << e.pos().line << ":" << e.pos().col << ": error: " << e.what()
             << "\n";
    }

    bool command(const std::string& input) {
        if (input == ":quit" || input == ":q") return false;
        if (input == ":trace on") {
            trace_ = true;
            return true;
        }
        if (input == ":trace off") {
            trace_ = false;
            return true;
        }
        err_ << "unknown command '" << input << "' (try :quit, :trace on, :trace off)\n";
        return true;
    }

    // Reads one input chunk, continuing across lines until braces, brackets
    // and parentheses balance.
    bool read_input(std::string& input) {
        input.clear();
        int balance = 0;
        bool first = true;
        for (;;) {
            if (showPrompt_) {
                out_ << (first ? "copl> " : "....> ");
                out_.flush();
            }
            std::string line;
            if (!std::getline(in_, line)) return !first && !input.empty();
            if (first && !line.empty() && line[0] == ':') {
                input = line;
                return true;
            }
            if (!input.empty()) input += '\n';
            input += line;
            balance += brace_balance(line);
            first = false;
            if (balance <= 0 && !only_whitespace(input)) return true;
            if (balance <= 0 && only_whitespace(input)) {
                input.clear();
                first = true;
            }
        }
    }

    static bool only_whitespace(const std::string& s) {
        return s.find_first_not_of(" \t\r\n") == std::string::npos;
    }

    static int brace_balance(const std::string& line) {
        int bal = 0;
        bool inStr = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            char c = line[i];
            if (inStr) {
                if (c == '\\')
                    ++i;
                else if (c == '"')
                    inStr = false;
                continue;
            }
            if (c == '"') {
                inStr = true;
            } else if (c == '/' && i + 1 < line.size() && line[i + 1] == '/') {
                break;
            } else if (c == '{' || c == '(' || c == '[') {
                ++bal;
            } else if (c == '}' || c == ')' || c == ']') {
                --bal;
            }
        }
        return bal;
    }
};

}  // namespace copl
