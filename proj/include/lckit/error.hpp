#ifndef LCKIT_ERROR_HPP
#define LCKIT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lckit {

enum class ErrorKind {
  IndexOutOfRange,
  ScenarioTooSmall,
  ScenarioTooLarge,
  ShapeMismatch,
  InvalidScenario,
  InvalidBehavior,
  InvalidModel,
  InvalidArgument,
  NonNormalizedState,
  SignalingInput,
  LpTooLarge,
  ZeroProbabilitySetting,
  Parse,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by the file readers; line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message)
      : Error(ErrorKind::Parse, std::to_string(line) + ":" +
                                    std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace lckit

#endif  // LCKIT_ERROR_HPP
