#ifndef SLR_ERROR_H_
#define SLR_ERROR_H_

#include <stdexcept>
#include <string>

namespace slr {

// Base class for every error raised by the library. `kind()` is a short
// machine-readable tag used by the command-line tool's error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, int line, const std::string& what)
      : Error("parse_error",
              source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class LoadError : public Error {
 public:
  explicit LoadError(const std::string& message)
      : Error("load_error", message) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& message)
      : Error("invalid_argument", message) {}
};

}  // namespace slr

#endif  // SLR_ERROR_H_
