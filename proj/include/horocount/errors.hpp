#pragma once

#include <stdexcept>
#include <string>

namespace horocount {

/// Malformed input: bad partition, out-of-range index, precondition violation.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation exceeded its configured memory or work budget.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace horocount
