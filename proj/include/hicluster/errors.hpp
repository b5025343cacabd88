#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hicluster {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Caller-supplied argument outside an operation's domain.
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// Operation precondition (e.g. disjointness of vertex sets) violated.
class PreconditionError : public InvalidArgument {
  public:
    using InvalidArgument::InvalidArgument;
};

/// Input size exceeds the limit an exponential-time routine accepts.
class ResourceGuardError : public Error {
  public:
    ResourceGuardError(const std::string& what, std::size_t size, std::size_t limit)
        : Error(what + ": size " + std::to_string(size) + " exceeds limit " +
                std::to_string(limit)),
          size_(size),
          limit_(limit) {}

    std::size_t size() const noexcept { return size_; }
    std::size_t limit() const noexcept { return limit_; }

  private:
    std::size_t size_;
    std::size_t limit_;
};

/// Malformed text input. `offset` is the byte position of the first bad character.
class ParseError : public Error {
  public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

  private:
    std::size_t offset_;
};

/// A module invariant failed at runtime. Indicates a bug, not bad input.
class InvariantError : public Error {
  public:
    using Error::Error;
};

/// Input is structurally valid but the algorithm has nothing to work with.
class DegenerateInputError : public InvalidArgument {
  public:
    using InvalidArgument::InvalidArgument;
};

}  // namespace hicluster
