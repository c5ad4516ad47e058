// errors.hpp: exception types shared by every module.
//
// ValidationError: an input violates a stated invariant (bad config, non-Hermitian
// matrix, tau1 > tau2). DomainError: a call outside an operation's domain.
// NumericError: a numerical procedure failed or produced an inconsistent result.

#pragma once

#include <stdexcept>
#include <string>

namespace decohere {

class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace decohere
