#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace accthr {

struct SelfcheckOptions {
    std::uint64_t seed = 1;
    int cases = 8;  // random cases per module
    // Fault injection: flip one filter entry of every decomposition the symrank check builds.
    bool corrupt_filter = false;
};

struct ModuleCheck {
    std::string module;
    bool passed = false;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::string detail;  // first failure, empty on success
};

struct SelfcheckReport {
    std::vector<ModuleCheck> modules;
    [[nodiscard]] bool passed() const;
};

// Oracle-equivalence suite on small instances, one entry per module. Deterministic in the options.
SelfcheckReport run_selfcheck(const SelfcheckOptions& options = {});

// One line per module: "module=<name> status=pass|fail cases=<c> failures=<f>[ detail=...]".
void print(std::ostream& out, const SelfcheckReport& report);

}  // namespace accthr
