#pragma once

#include <stdexcept>
#include <string>

namespace sneakbench {

// Base class for all recoverable input/validation failures.
// The CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptyDeviceError : public Error {
public:
    using Error::Error;
};

class NonMonotonicTimeError : public Error {
public:
    using Error::Error;
};

class InvalidWindowError : public Error {
public:
    using Error::Error;
};

class MissingAxesError : public Error {
public:
    using Error::Error;
};

class InvalidThresholdsError : public Error {
public:
    using Error::Error;
};

class ClassOverlapError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

class RateTooLowError : public Error {
public:
    using Error::Error;
};

class TooCrowdedError : public Error {
public:
    using Error::Error;
};

class MixedLevelSetsError : public Error {
public:
    using Error::Error;
};

class EmptyGroupError : public Error {
public:
    using Error::Error;
};

class InvariantViolationError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
    ParseError(const std::string& source, int line, const std::string& msg)
        : Error(source + ":" + std::to_string(line) + ": " + msg) {}
};

}  // namespace sneakbench
