#pragma once

#include <stdexcept>
#include <string>

namespace gausscov {

/// Base class for every error thrown by this library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad caller input: dimension mismatches, out-of-range arguments,
/// malformed files. Maps to exit code 1 in the CLI.
class invalid_input_error : public error {
public:
    using error::error;
};

/// A candidate column lies (numerically) inside the span of the columns
/// already included, so it carries no new direction.
class collinearity_error : public invalid_input_error {
public:
    using invalid_input_error::invalid_input_error;
};

/// A vector with zero norm was passed where a direction is required.
class degenerate_input_error : public invalid_input_error {
public:
    using invalid_input_error::invalid_input_error;
};

/// Too few observations remain for the requested fit (n - k - 1 < 1).
class degrees_of_freedom_error : public invalid_input_error {
public:
    using invalid_input_error::invalid_input_error;
};

/// An internal numeric routine could not reach its accuracy target.
/// Never downgraded to a silent wrong value. Maps to exit code 2.
class accuracy_error : public error {
public:
    using error::error;
};

} // namespace gausscov
