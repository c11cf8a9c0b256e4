#pragma once

#include <string>
#include <vector>

namespace css {

// One numeric comparison: lhs against rhs with the residual that decides it.
struct CheckReport {
    std::string check;
    std::string anchor;  // short description of the claimed identity
    double lhs = 0;
    double rhs = 0;
    double residual = 0;
    bool pass = false;
    std::string detail;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<CheckReport> checks;
    std::string error;  // set when a check threw
    bool pass() const;
};

inline constexpr int kCriteria = 12;

CriterionResult run_criterion(int id);
std::vector<CriterionResult> run_acceptance();

// Exact integer comparison.
CheckReport exact_check(std::string check, std::string anchor, double lhs, double rhs, std::string detail = "");
// Passes when residual < tol.
CheckReport tol_check(std::string check, std::string anchor, double lhs, double rhs, double residual, double tol,
                      std::string detail = "");

}  // namespace css
