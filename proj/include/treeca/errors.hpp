#pragma once

#include <stdexcept>
#include <string>

namespace treeca {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed vertex word (digit out of range for k).
class AddressError : public Error {
public:
    using Error::Error;
};

// An operation was called outside its documented domain.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// A combinatorial space exceeded its configured cap.
class CapacityError : public Error {
public:
    using Error::Error;
};

// Finite-support simulation was asked to run a rule with f(0) != 0.
class NonQuiescentError : public Error {
public:
    using Error::Error;
};

// Data lies outside the described region of an automorphism.
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed input file.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace treeca
