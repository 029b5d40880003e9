#pragma once

#include <stdexcept>
#include <string>

namespace jinxin {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameters or configuration outside the admissible domain.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A caller broke a documented precondition (too few samples, mismatched grids...).
class ContractError : public Error {
public:
    using Error::Error;
};

/// NaN, blow-up or any other failure of a numerical run.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace jinxin
