#pragma once

#include <stdexcept>
#include <string>

namespace lienav {

enum class ErrorKind {
  kInvalidArgument,
  kOutOfChart,
  kNotPositiveDefinite,
  kInvalidPosition,
  kSingularInnovation,
  kSmootherGain,
  kData,
  kAlignmentImpossible,
  kNotStationary,
  kInsufficientFixes,
  kNonConvexFit,
  kUnstableStep,
  kParse,
  kMisaligned,
  kDivergence,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` discriminates the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace lienav
