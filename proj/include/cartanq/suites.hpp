// Named verification suites (lie, twist, char0-quant, modular) shared by the
// CLI driver and the acceptance harness.  Each suite enumerates independent
// check items; items run on a worker pool and the report is assembled
// single-threaded in declaration order, so reports are deterministic given
// (config, seed) apart from the optional wall-clock fields.
#ifndef CARTANQ_SUITES_HPP
#define CARTANQ_SUITES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cartanq {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    int n = 1;
    std::int64_t p = 0;  // 0 = char-0 suites
    long q = 0;
    long tdeg = 3;          // t-degree bound N for char-0 truncations
    std::string family;     // "", "vertical", "horizontal", "contact", "ix", "product"
    int k = 1;
    int m = 2;              // horizontal companion index
    std::uint64_t seed = 0;
    long sample = 25;       // seeded sample size for the modular suites
    double max_seconds = -1;  // < 0: no budget
    int workers = 0;          // 0 = hardware concurrency
    bool timings = false;     // false: zero the millis fields (byte-stable output)
};

struct CheckResult {
    std::string name;
    std::string family;
    std::string status;   // "pass" | "fail" | "skipped"
    std::string witness;  // empty = omitted from JSON
    long residual_terms = 0;
    long millis = 0;
};

struct SuiteReport {
    std::string suite;
    RunConfig cfg;
    std::vector<CheckResult> checks;
    bool incomplete = false;

    bool all_passed() const {
        if (incomplete) return false;
        for (const auto& c : checks)
            if (c.status == "fail") return false;
        return true;
    }
};

// Validates cfg for the suite and runs it.  Throws UsageError on invalid
// parameter combinations (e.g. horizontal family with n = 1).
SuiteReport run_suite(const std::string& suite, const RunConfig& cfg);

std::vector<std::string> suite_names();

// Serialized report: {suite, params:{n,p,q,N,seed}, checks:[...]} with a
// trailing newline; key order is fixed.
std::string report_json(const SuiteReport& r);

}  // namespace cartanq

#endif
