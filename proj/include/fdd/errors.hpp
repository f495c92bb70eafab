// errors.hpp — Exception hierarchy shared by all modules

#pragma once

#include <stdexcept>
#include <string>

namespace fdd {

// Domain errors raised by the physics itself rather than by malformed input.
// The CLI maps these onto exit code 2.
class PhysicsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Monodromy eigenvalues coincide; Floquet modes are not uniquely defined.
class DegeneracyError : public PhysicsError {
public:
    using PhysicsError::PhysicsError;
};

// Sideband sums did not converge below the grid's usable bandwidth.
class TruncationError : public PhysicsError {
public:
    using PhysicsError::PhysicsError;
};

// Time-scale hierarchy required by a comparison or approximation is violated.
class HierarchyError : public PhysicsError {
public:
    using PhysicsError::PhysicsError;
};

// Rate matrix has a significantly negative eigenvalue.
class NonCpError : public PhysicsError {
public:
    using PhysicsError::PhysicsError;
};

// Liouvillian kernel is not one-dimensional.
class MultiplicityError : public PhysicsError {
public:
    MultiplicityError(const std::string& what, int dimension)
        : PhysicsError(what), dimension_(dimension) {}
    int dimension() const { return dimension_; }

private:
    int dimension_;
};

// Fixed-step integration would need an absurd number of steps.
class StepSizeError : public PhysicsError {
public:
    using PhysicsError::PhysicsError;
};

// Atom count beyond what the dense builders support.
class SizeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Scenario file content is malformed; `key()` names the offending entry.
class ScenarioError : public std::invalid_argument {
public:
    ScenarioError(const std::string& key, const std::string& what)
        : std::invalid_argument(key + ": " + what), key_(key) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

// Reading or writing a file failed.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace fdd
