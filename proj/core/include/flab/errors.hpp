#pragma once

#include <stdexcept>
#include <string>

namespace flab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A scalar field was evaluated where it (or one of its derivatives) is singular.
class SingularEvaluation : public Error {
public:
    using Error::Error;
};

/// The fundamental tensor is not positive definite or is too ill-conditioned to invert.
class DegenerateMetric : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent metric / chart configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A point left the chart's domain box.
class ChartExit : public Error {
public:
    ChartExit(const std::string& what, int last_valid)
        : Error(what), last_valid_(last_valid) {}
    int last_valid_index() const { return last_valid_; }

private:
    int last_valid_;
};

} // namespace flab
