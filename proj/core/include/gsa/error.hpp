#pragma once

#include <stdexcept>
#include <string>

namespace gsa {

// Base for every failure the library reports. The CLI maps these to exit
// status 2 (data error); precondition violations on arguments use
// std::invalid_argument and map to the same status.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class DimensionUnsupportedError : public Error {
public:
    using Error::Error;
};

class DesignShapeError : public Error {
public:
    using Error::Error;
};

class InfeasibleBudgetError : public Error {
public:
    using Error::Error;
};

// Output variance (or an estimator denominator) is zero.
class DegenerateOutputError : public Error {
public:
    using Error::Error;
};

class UndefinedCorrelationError : public Error {
public:
    using Error::Error;
};

class IncompleteDesignError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

} // namespace gsa
