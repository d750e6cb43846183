#pragma once

#include <stdexcept>
#include <string>

namespace pass {

// Bad numeric input: out-of-range parameter, violated type invariant.
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Antenna and user coincide, so the free-space channel is undefined.
class DegenerateGeometry : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// The requested antenna count cannot be deployed under the spacing constraint.
class InfeasibleDeployment : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Every grid point is excluded for some antenna during an element-wise update.
class InfeasibleGrid : public std::runtime_error {
public:
    InfeasibleGrid(const std::string& what, std::size_t antenna)
        : std::runtime_error(what), antenna_(antenna) {}
    std::size_t antenna() const noexcept { return antenna_; }

private:
    std::size_t antenna_;
};

// Exhaustive oracle asked to enumerate more configurations than allowed.
class OracleBudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A bracketing assumption that should hold mathematically did not.
class InternalConsistency : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Malformed configuration file or unknown experiment identifier.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace pass
