#pragma once

#include <string>
#include <vector>

namespace mcas {

struct CheckResult {
    std::string name;
    double predicted = 0.0;
    double observed = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// Named verification suites. "trivial" runs deterministic-model
// identities only; "analytic", "cascade", "flat", "curve" cover the
// statistical experiments; "full" runs everything.
std::vector<std::string> verify_suites();
std::vector<CheckResult> run_verify_suite(const std::string& suite);

std::string checks_to_json(const std::vector<CheckResult>& checks);
bool all_passed(const std::vector<CheckResult>& checks);

}  // namespace mcas
