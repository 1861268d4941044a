#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace bosonic {

// Overrides for a suite; unset fields take the suite's default ranges.
struct SuiteOptions {
    std::optional<int> m;
    std::optional<int> k;
    std::optional<int> maxdeg;
    std::optional<int> samples;
    std::uint64_t seed = 1;
};

struct SuiteResult {
    std::string name;
    int criterion = 0;
    std::string tolerance;
    long passed = 0;
    long total = 0;
    std::vector<std::string> failures;  // offending configurations
    std::vector<std::string> notes;     // measured values
    double seconds = 0;

    bool ok() const { return total > 0 && passed == total; }
    void check(bool cond, const std::string& what);
    std::string summary() const;  // "PASS n/N" or "FAIL n/N"
};

struct SuiteInfo {
    std::string name;
    int criterion;
    std::string description;
    std::function<SuiteResult(const SuiteOptions&)> run;
};

const std::vector<SuiteInfo>& suites();
const SuiteInfo* find_suite(const std::string& name);

SuiteResult verify_dimension(const SuiteOptions& opt);
SuiteResult verify_membership(const SuiteOptions& opt);
SuiteResult verify_fischer(const SuiteOptions& opt);
SuiteResult verify_orthogonality(const SuiteOptions& opt);
SuiteResult verify_reproducing(const SuiteOptions& opt);
SuiteResult verify_bergman(const SuiteOptions& opt);
SuiteResult verify_poisson(const SuiteOptions& opt);
SuiteResult verify_series(const SuiteOptions& opt);
SuiteResult verify_growth(const SuiteOptions& opt);
SuiteResult verify_weak_star(const SuiteOptions& opt);

}  // namespace bosonic
