#pragma once

#include <stdexcept>
#include <string>

namespace xsgen {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A primitivity check can fail two ways; callers surface which one broke.
enum class PrimitivityFailure { Reducible, ProperDivisorOrder };

class NotPrimitiveError : public Error {
public:
    NotPrimitiveError(PrimitivityFailure failure, const std::string& what)
        : Error(what), failure_(failure) {}
    PrimitivityFailure failure() const { return failure_; }

private:
    PrimitivityFailure failure_;
};

// Factoring gave up, or a factor table entry is malformed.
class FactorizationError : public Error {
public:
    using Error::Error;
};

// A randomized search ran out of its attempt budget.
class SearchExhaustedError : public Error {
public:
    SearchExhaustedError(const std::string& what, unsigned long attempts)
        : Error(what), attempts_(attempts) {}
    unsigned long attempts() const { return attempts_; }

private:
    unsigned long attempts_;
};

class CancelledError : public Error {
public:
    using Error::Error;
};

}  // namespace xsgen
