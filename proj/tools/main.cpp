#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "seer/cli.hpp"

int main(int argc, char** argv) {
    seer::CliContext ctx;
    ctx.in = &std::cin;
    ctx.out = &std::cout;
    ctx.err = &std::cerr;

    std::error_code ec;
    ctx.self_path = std::filesystem::read_symlink("/proc/self/exe", ec);
    if (ec) ctx.self_path = argv[0];

#ifdef SEER_ENABLE_TEST_MODE
    if (const char* mode = std::getenv("SEER_TEST_MODE"); mode && std::string(mode) == "1") {
        ctx.test_mode = true;
        if (const char* seed = std::getenv("SEER_TEST_SEED")) ctx.test_seed = std::strtoull(seed, nullptr, 10);
        if (const char* log = std::getenv("SEER_TEST_KEYLOG")) ctx.test_keylog = log;
        std::cerr << "seer: TEST MODE, deterministic entropy, not for real data\n";
    }
#endif

    return seer::run_cli(std::vector<std::string>(argv + 1, argv + argc), ctx);
}
