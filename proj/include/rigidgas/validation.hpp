#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rigidgas/report.hpp"

namespace rigidgas {

enum class SuiteScale {
    fast,  // reduced sample sizes, statistical checks by p-value; about a minute
    full,  // acceptance sizes and tolerances
};

struct SuiteOptions {
    SuiteScale scale = SuiteScale::full;
    std::uint64_t seed = 1;
    int workers = 1;
};

struct CriterionInfo {
    int id;
    const char* name;
    CriterionResult (*run)(const SuiteOptions&);
};

const std::vector<CriterionInfo>& criteria();

// Runs the selected criteria (all when `only` is empty) and reports each
// result through `done` as soon as it is available.
std::vector<CriterionResult> run_suite(const SuiteOptions& opts, const std::vector<int>& only = {},
                                       const std::function<void(const CriterionResult&)>& done = {});

}  // namespace rigidgas
