#include "ragloop/cli/app.hpp"

#include <atomic>
#include <csignal>
#include <iostream>

namespace {

std::atomic<bool> g_cancel{false};

extern "C" void on_sigint(int) {
    g_cancel.store(true);
    // A second Ctrl-C terminates immediately.
    std::signal(SIGINT, SIG_DFL);
}

} // namespace

int main(int argc, char** argv) {
    std::signal(SIGINT, on_sigint);
    std::vector<std::string> args(argv + 1, argv + argc);
    return ragloop::cli::run_cli(args, std::cout, std::cerr, &g_cancel);
}
