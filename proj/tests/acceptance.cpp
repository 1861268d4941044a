// Evaluates every acceptance criterion and prints one PASS/FAIL line each.
// Exits 0 once all criteria have been evaluated; with --strict, exits 1 if
// any criterion fails.

#include "bosonic/verify.hpp"

#include <cstdio>
#include <cstring>

using namespace bosonic;

int main(int argc, char** argv) {
    bool strict = false, verbose = true;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--strict") == 0)
            strict = true;
        else if (std::strcmp(argv[i], "--quiet") == 0)
            verbose = false;
        else {
            std::fprintf(stderr, "usage: acceptance [--strict] [--quiet]\n");
            return 2;
        }
    }
    int failed = 0;
    double total_seconds = 0;
    for (const auto& s : suites()) {
        SuiteResult r;
        try {
            r = s.run(SuiteOptions{});
        } catch (const std::exception& e) {
            r.name = s.name;
            r.criterion = s.criterion;
            r.failures.push_back(std::string("exception: ") + e.what());
        }
        total_seconds += r.seconds;
        if (!r.ok()) ++failed;
        std::printf("%s criterion %d (%s): %ld/%ld checks, tolerance: %s, %.1f s\n", r.ok() ? "PASS" : "FAIL",
                    s.criterion, s.description.c_str(), r.passed, r.total, r.tolerance.c_str(), r.seconds);
        if (verbose) {
            for (const auto& f : r.failures) std::printf("    offending: %s\n", f.c_str());
            for (const auto& n : r.notes) std::printf("    measured: %s\n", n.c_str());
        }
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria pass, %.1f s total\n", static_cast<int>(suites().size()) - failed, suites().size(),
                total_seconds);
    return strict && failed ? 1 : 0;
}
