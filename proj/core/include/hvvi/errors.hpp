#pragma once

#include <stdexcept>
#include <string>

namespace hvvi {

/// Precondition breach: mismatched base points, out-of-range arguments,
/// malformed domain values.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// An evaluator returned a non-finite value at a probe point.
class ProbeFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Lookup of an unknown identifier; the message lists what is available.
class NotFoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Configuration document rejected; the message names the offending field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace hvvi
