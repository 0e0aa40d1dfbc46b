#pragma once

#include <stdexcept>
#include <string>

namespace helmholtz {

// Base for every error raised by the library. Check failures that are part of
// a report (hypothesis checks, monitor checks) are not errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidSpec : public Error { using Error::Error; };
class InvalidConfig : public Error { using Error::Error; };
class NoSignChange : public Error { using Error::Error; };
class HypothesesFail : public Error { using Error::Error; };
class OutOfRange : public Error { using Error::Error; };
class TooFewEvents : public Error { using Error::Error; };
class InsufficientRange : public Error { using Error::Error; };
class NotPeriodic : public Error { using Error::Error; };
class NoBracket : public Error { using Error::Error; };
class NoConvergence : public Error { using Error::Error; };

}  // namespace helmholtz
