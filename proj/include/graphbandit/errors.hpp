#pragma once

#include <stdexcept>

namespace graphbandit {

// Thrown when an exact solver is asked for an instance above its size guard.
struct SizeGuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a candidate set A cannot dominate the target set B.
struct DominationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown on malformed experiment configs, graph files or loss files.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace graphbandit
