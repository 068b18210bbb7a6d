#pragma once

#include <stdexcept>
#include <string>

namespace minresmon {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid user input: dimension mismatches, bad options, missing files.
class InputError : public Error {
  public:
    using Error::Error;
};

/// Malformed file content; carries the 1-based line number when known.
class ParseError : public InputError {
  public:
    ParseError(const std::string& message, long line_number = -1)
    : InputError(line_number >= 0 ? message + " (line " + std::to_string(line_number) + ")"
                                  : message)
    , line_number_(line_number)
    {}

    long line_number() const { return line_number_; }

  private:
    long line_number_;
};

/// A preconditioner block failed to factor or acts indefinitely.
class PreconditionerError : public Error {
  public:
    PreconditionerError(const std::string& message, std::string block_label = {})
    : Error(block_label.empty() ? message : message + " [block '" + block_label + "']")
    , block_label_(std::move(block_label))
    {}

    const std::string& block_label() const { return block_label_; }

  private:
    std::string block_label_;
};

/// Unrecoverable breakdown of the iteration itself.
class BreakdownError : public Error {
  public:
    using Error::Error;
};

} // namespace minresmon
