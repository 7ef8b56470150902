// Acceptance suite: runs every reproduction criterion and prints one
// PASS/FAIL line per criterion. Exit status is nonzero if any fails.
//   acceptance [--grid <harmonic_200.csv>] [--mc-samples N] [--seed S]

#include <cstdlib>
#include <iostream>
#include <string>

#include "collmem/acceptance.hpp"

int main(int argc, char** argv) {
    collmem::acceptance::Options opt;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        if (flag == "--grid") {
            opt.grid_path = argv[i + 1];
        } else if (flag == "--mc-samples") {
            opt.monte_carlo_samples = std::atoll(argv[i + 1]);
        } else if (flag == "--seed") {
            opt.seed = std::strtoull(argv[i + 1], nullptr, 10);
        } else {
            std::cerr << "unknown flag " << flag << '\n';
            return 2;
        }
    }
    int failed = 0;
    for (const auto& r : collmem::acceptance::run_all(opt)) {
        std::cout << (r.passed ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.name << "\n     " << r.detail
                  << '\n';
        failed += r.passed ? 0 : 1;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
    return failed == 0 ? 0 : 1;
}
