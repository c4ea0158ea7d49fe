#include <pthread.h>
#include <unistd.h>

#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "copl/format.hpp"
#include "copl/repl.hpp"
#include "copl/run.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitCompile = 2;
constexpr int kExitUsage = 3;

void print_usage(std::ostream& os) {
    os << "usage: copl run <file.cop> [--trace] [--max-depth N]\n"
          "       copl repl [--trace] [--max-depth N]\n";
}

struct Cli {
    std::string command;
    std::string sourcePath;
    copl::RunOptions options;
};

std::optional<Cli> parse_args(int argc, char** argv) {
    if (argc < 2) return std::nullopt;
    Cli cli;
    cli.command = argv[1];
    int i = 2;
    if (cli.command == "run") {
        if (i >= argc || argv[i][0] == '-') return std::nullopt;
        cli.sourcePath = argv[i++];
    } else if (cli.command != "repl") {
        return std::nullopt;
    }
    for (; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--trace") {
            cli.options.trace = true;
        } else if (arg == "--max-depth") {
            if (++i >= argc) return std::nullopt;
            try {
                cli.options.maxDepth = std::stoi(argv[i]);
            } catch (...) {
                return std::nullopt;
            }
            if (cli.options.maxDepth < 1) return std::nullopt;
        } else {
            return std::nullopt;
        }
    }
    return cli;
}

int run_file(const Cli& cli) {
    std::ifstream file(cli.sourcePath, std::ios::binary);
    if (!file) {
        std::cerr << "copl: cannot open '" << cli.sourcePath << "'\n";
        return kExitUsage;
    }
    std::ostringstream buf;
    buf << file.rdbuf();
    std::string source = buf.str();

    copl::CompiledProgram program;
    try {
        program = copl::compile_source(source);
    } catch (const copl::Error& e) {
        std::cerr << cli.sourcePath << ":" << e.pos().line << ":" << e.pos().col
                  << ": error: " << e.what() << "\n";
        return kExitCompile;
    }

    std::function<void(const copl::TraceEvent&)> listener;
    if (cli.options.trace)
        listener = [](const copl::TraceEvent& e) {
            std::cerr << copl::format_trace_event(e) << "\n";
        };
    copl::ExecutionOutcome outcome =
        copl::run_program(program.model, cli.options, &std::cout, listener);
    std::cout.flush();
    if (!outcome.ok) {
        std::cerr << cli.sourcePath << ":" << outcome.errorPos.line << ":"
                  << outcome.errorPos.col << ": error: " << outcome.errorMessage << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

struct MainArgs {
    int argc;
    char** argv;
    int result;
};

int real_main(int argc, char** argv) {
    std::optional<Cli> cli = parse_args(argc, argv);
    if (!cli) {
        print_usage(std::cerr);
        return kExitUsage;
    }
    if (cli->command == "run") return run_file(*cli);
    bool tty = isatty(fileno(stdin));
    copl::Repl repl(std::cin, std::cout, std::cerr, cli->options, tty);
    return repl.run();
}

void* thread_main(void* p) {
    auto* args = static_cast<MainArgs*>(p);
    args->result = real_main(args->argc, args->argv);
    return nullptr;
}

}  // namespace

// Deeply recursive dispatch (the depth cap defaults to 10000 frames) needs
// more native stack than the default thread gets, so the interpreter runs
// on a dedicated 512 MiB stack.
int main(int argc, char** argv) {
    pthread_attr_t attr;
    pthread_attr_init(&attr);
    pthread_attr_setstacksize(&attr, 512u * 1024u * 1024u);
    MainArgs args{argc, argv, kExitUsage};
    pthread_t thread;
    if (pthread_create(&thread, &attr, thread_main, &args) != 0) {
        pthread_attr_destroy(&attr);
        return real_main(argc, argv);
    }
    pthread_join(thread, nullptr);
    pthread_attr_destroy(&attr);
    return args.result;
}
