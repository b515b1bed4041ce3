#pragma once

// The acceptance suite: twelve numbered checks with fixed tolerances, shared by
// `bogo verify` and the acceptance test binary.

#include <string>
#include <vector>

#include <json.hpp>

namespace bogo {

enum class VerifyLevel { quick, full };

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double seconds = 0;
    double runtime_limit = 0;  // seconds, 0 = none
    std::string detail;        // one line: worst measured quantity against its bound
    nlohmann::json data;
};

struct VerifyReport {
    VerifyLevel level = VerifyLevel::full;
    std::vector<CriterionResult> results;
    bool passed() const;
};

VerifyLevel parse_level(const std::string& s);
const char* to_string(VerifyLevel level);

// Runs the criteria listed in `only` (all when empty). quick trims beta grids and
// route comparisons; full runs every criterion at its stated size.
VerifyReport run_verification(VerifyLevel level, const std::vector<int>& only = {}, int threads = 0);

// "PASS  4  route agreement (1.2 s): ..." per criterion
std::string summary_line(const CriterionResult& r);
// Timing fields are left out so that the document is reproducible.
nlohmann::json to_json(const VerifyReport& report, bool include_timing = false);

}  // namespace bogo
