#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace rabicd {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class CutoffTooSmall : public Error {
public:
    CutoffTooSmall(const std::string& what, int required)
        : Error(what + " (requires cutoff n >= " + std::to_string(required) + ")"), required_(required) {}
    int required_cutoff() const { return required_; }

private:
    int required_;
};

class NotHermitian : public Error {
public:
    using Error::Error;
};

class NotPositive : public Error {
public:
    using Error::Error;
};

class EmptySupport : public Error {
public:
    using Error::Error;
};

class UndefinedCorrelation : public Error {
public:
    using Error::Error;
};

// Raised when step doubling fails to reach the requested final-state tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double achieved)
        : Error(describe(what, achieved)), achieved_(achieved) {}
    double achieved() const { return achieved_; }

private:
    static std::string describe(const std::string& what, double achieved) {
        std::ostringstream os;
        os << what << " (achieved delta " << achieved << ")";
        return os.str();
    }
    double achieved_;
};

}  // namespace rabicd
