#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace facpca {

enum class ErrorKind {
  Size,
  Data,
  Degenerate,
  Index,
  Shape,
  NotPsd,
  Convergence,
  Inconsistent,
  Order,
  Threshold,
  Parse,
  Io,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Size: return "SIZE";
    case ErrorKind::Data: return "DATA";
    case ErrorKind::Degenerate: return "DEGENERATE";
    case ErrorKind::Index: return "INDEX";
    case ErrorKind::Shape: return "SHAPE";
    case ErrorKind::NotPsd: return "NOT_PSD";
    case ErrorKind::Convergence: return "CONVERGENCE";
    case ErrorKind::Inconsistent: return "INCONSISTENT";
    case ErrorKind::Order: return "ORDER";
    case ErrorKind::Threshold: return "THRESHOLD";
    case ErrorKind::Parse: return "PARSE";
    case ErrorKind::Io: return "IO";
  }
  return "UNKNOWN";
}

/// Library error. Every failure carries a kind; pipeline stages additionally
/// attach the number of the step that failed.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        detail_(message) {}

  Error(ErrorKind kind, const std::string& message, int step)
      : std::runtime_error("step " + two_digits(step) + ": " +
                           std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        detail_(message),
        step_(step) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }
  std::optional<int> step() const noexcept { return step_; }

  Error at_step(int step) const { return Error(kind_, detail_, step); }

 private:
  static std::string two_digits(int step) {
    return step < 10 ? "0" + std::to_string(step) : std::to_string(step);
  }

  ErrorKind kind_;
  std::string detail_;
  std::optional<int> step_;
};

}  // namespace facpca
