// Standalone acceptance runner for ctest: prints one PASS/FAIL line per
// criterion and exits nonzero when any criterion fails.
#include <cstdlib>
#include <iostream>

#include "fbmsim/acceptance.hpp"

int main(int argc, char** argv) {
    fbmsim::AcceptanceOptions options;
    options.out_dir = "acceptance_out";
    if (argc > 1) options.seed = std::strtoull(argv[1], nullptr, 10);
    if (argc > 2) options.threads = std::atoi(argv[2]);
    try {
        int failures = fbmsim::run_acceptance(options, std::cout);
        return failures == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
