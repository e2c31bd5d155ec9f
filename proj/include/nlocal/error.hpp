#pragma once

#include <stdexcept>
#include <string>

namespace nlocal {

// Caller supplied something outside an operation's domain (bad range,
// wrong dimension, unnormalized input, malformed config value).
class InvalidArgument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// A computed quantity broke an invariant it must satisfy (negative
// probability beyond noise, non-normalized table, signaling output).
class ConsistencyError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// The requested joint register does not fit the dense engine.
class CapacityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace nlocal
