#pragma once

#include <stdexcept>
#include <string>

namespace selberg {

// Input outside an operation's domain (bad parameter, point on the boundary, ...).
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Numerical procedure did not reach its tolerance.
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed user input (group files, CLI values).
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace selberg
