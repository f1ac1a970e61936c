#pragma once

#include <stdexcept>
#include <string>

namespace resetlab {

// Parameter or configuration values that violate a documented invariant.
class ConfigError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

// Singular matrices, poles on the evaluation grid, divergent simulations,
// failed calibrations.
class NumericalError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace resetlab
