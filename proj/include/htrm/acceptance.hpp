#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace htrm {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
    double budget = 0;  // wall-clock limit in seconds
};

struct AcceptanceOptions {
    int jobs = 0;
    std::uint64_t seed = 20240601;
};

struct CriterionInfo {
    int id;
    const char* suite;
    const char* title;
    double budget;
};
const std::vector<CriterionInfo>& acceptance_criteria();

// Suite names select one criterion; "all" selects every one.
std::vector<int> suite_ids(const std::string& suite);
CriterionResult run_criterion(int id, const AcceptanceOptions& opt = {});
std::string format_result(const CriterionResult& r);

}  // namespace htrm
