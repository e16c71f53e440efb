#pragma once

#include <stdexcept>
#include <string>

namespace shiftconv {

// Contract violations: a caller broke a documented precondition.
struct contract_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Evaluation requested at (or too close to) a pole of the function.
struct pole_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Series evaluated outside its region of convergence.
struct region_error : std::domain_error {
    using std::domain_error::domain_error;
};

// A truncation budget cannot meet its target tail bound.
struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Allocation would exceed the configured memory budget.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Design matrix too close to singular for a meaningful fit.
struct conditioning_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameter region not covered by any implemented evaluation path.
struct unsupported_region_error : std::domain_error {
    using std::domain_error::domain_error;
};

}  // namespace shiftconv
