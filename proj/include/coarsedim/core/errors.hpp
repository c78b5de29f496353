#pragma once

#include <stdexcept>
#include <string>

namespace coarsedim {

// Every failure raised by the library derives from Error so callers (the CLI
// in particular) can map categories onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class NotGenerated : public Error {
 public:
  explicit NotGenerated(std::size_t element)
      : Error("element " + std::to_string(element) +
              " is not reachable from the identity"),
        element_(element) {}
  std::size_t element() const noexcept { return element_; }

 private:
  std::size_t element_;
};

class InvalidCover : public Error {
 public:
  explicit InvalidCover(std::size_t uncovered)
      : Error("point " + std::to_string(uncovered) + " is not covered"),
        uncovered_(uncovered) {}
  InvalidCover(const std::string& what, std::size_t point)
      : Error(what), uncovered_(point) {}
  std::size_t point() const noexcept { return uncovered_; }

 private:
  std::size_t uncovered_;
};

class ResourceError : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class InvalidScale : public Error {
 public:
  using Error::Error;
};

// A construction failed its own certificate. Always a bug, never an input
// problem.
class InternalError : public Error {
 public:
  using Error::Error;
};

class InsufficientChain : public Error {
 public:
  InsufficientChain(std::size_t rounds_completed, const std::string& what)
      : Error(what), rounds_completed_(rounds_completed) {}
  std::size_t rounds_completed() const noexcept { return rounds_completed_; }

 private:
  std::size_t rounds_completed_;
};

}  // namespace coarsedim
