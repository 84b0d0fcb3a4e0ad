#pragma once

#include <stdexcept>
#include <string>

namespace gapforge {

// Raised when an operation would exceed its configured enumeration or
// search budget. Callers that can degrade gracefully catch this; the CLI
// maps it to exit code 3.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace gapforge
