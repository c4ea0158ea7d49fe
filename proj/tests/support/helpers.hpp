#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "copl/run.hpp"

namespace copl::test {

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
}

struct ProcResult {
    int exitCode = -1;
    std::string out;
    std::string err;
};

// Runs a shell command capturing stdout and stderr separately.
inline ProcResult run_process(const std::string& cmd) {
    std::string outPath = "/tmp/copl_test_out_" + std::to_string(getpid());
    std::string errPath = "/tmp/copl_test_err_" + std::to_string(getpid());
    std::string full = cmd + " >" + outPath + " 2>" + errPath;
    int status = std::system(full.c_str());
    ProcResult r;
    if (WIFEXITED(status))
        r.exitCode = WEXITSTATUS(status);
    else if (WIFSIGNALED(status))
        r.exitCode = -WTERMSIG(status);
    r.out = read_file(outPath);
    r.err = read_file(errPath);
    std::remove(outPath.c_str());
    std::remove(errPath.c_str());
    return r;
}

// Compiles and runs a source string, expecting a specific runtime error kind.
inline ErrorKind run_expecting_error(const std::string& source) {
    ExecutionOutcome out = run_source(source);
    if (out.ok) throw std::runtime_error("expected a runtime error, got success");
    return out.errorKind;
}

// Compiles a source string expecting a compile-phase failure.
inline ErrorKind compile_error_kind(const std::string& source) {
    try {
        compile_source(source);
    } catch (const Error& e) {
        return e.kind();
    }
    throw std::runtime_error("expected a compile error, got success");
}

inline std::vector<std::string> corpus_program_names() {
    return {
        "account_value",  "dual_getbalance", "balance_property",
        "bank_account_ref", "get_interest",  "ref_keyed_balance",
        "point_bonus",    "panel_button",    "logging_interception",
    };
}

}  // namespace copl::test
