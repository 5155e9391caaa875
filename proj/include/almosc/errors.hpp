#pragma once

#include <stdexcept>
#include <string>

namespace almosc {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or out-of-domain input: bad expression text, bad spec file,
// violated operation preconditions. Maps to CLI exit status 2.
class InputError : public Error {
public:
    using Error::Error;
};

// Runtime evaluation failure on otherwise valid input: division by zero at
// some index, floating-point overflow, exact root not representable.
class EvalError : public Error {
public:
    using Error::Error;
};

// A computed quantity failed an internal consistency check (nonzero residual,
// violated invariant). Maps to CLI exit status 1.
class VerificationError : public Error {
public:
    using Error::Error;
};

} // namespace almosc
