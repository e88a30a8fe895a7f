#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace toa {

struct CheckResult {
    std::string name;
    std::string description;
    double measured = 0.0;
    double expected = 0.0;
    double tol = 0.0;
    bool passed = false;
    double seconds = 0.0;
    std::string detail;
};

/// Names of the acceptance checks in their canonical order.
std::vector<std::string> check_names();

/// Runs one check; InvalidArgument for an unknown name. Numerical exceptions
/// are caught and reported as a failed check.
CheckResult run_check(const std::string& name);

/// Runs every check, or only `only` when it is non-empty.
std::vector<CheckResult> run_verification(const std::string& only = "");

nlohmann::json report_to_json(const std::vector<CheckResult>& results);

} // namespace toa
