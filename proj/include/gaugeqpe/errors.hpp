#pragma once

#include <stdexcept>
#include <string>

namespace gaugeqpe {

// Input violates an operation's contract (non-Hermitian matrix, unnormalized
// state, mismatched dimensions, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A dense path was asked to allocate past its configured dimension guard.
class ResourceError : public std::length_error {
public:
    using std::length_error::length_error;
};

// The ring grid cannot resolve the requested mode content (N < 2l+1).
class ResolutionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace gaugeqpe
