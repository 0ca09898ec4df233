#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace reclab {

// Every failure raised by the library derives from Error and carries a stable
// kind name, which the CLI maps onto exit codes and error JSON.
enum class ErrorKind {
  kAmbiguousRounding,
  kInsufficientPrecision,
  kSingularBasis,
  kNoUsableVector,
  kNotFound,
  kNoRelation,
  kIndexOutOfRange,
  kDimensionMismatch,
  kDegenerateFit,
  kVerificationFailed,
  kParseError,
  kInvalidArgument,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define RECLAB_DEFINE_ERROR(Name)                                      \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& message)                          \
        : Error(ErrorKind::k##Name, message) {}                        \
  };

RECLAB_DEFINE_ERROR(AmbiguousRounding)
RECLAB_DEFINE_ERROR(InsufficientPrecision)
RECLAB_DEFINE_ERROR(SingularBasis)
RECLAB_DEFINE_ERROR(NoUsableVector)
RECLAB_DEFINE_ERROR(NotFound)
RECLAB_DEFINE_ERROR(NoRelation)
RECLAB_DEFINE_ERROR(IndexOutOfRange)
RECLAB_DEFINE_ERROR(DimensionMismatch)
RECLAB_DEFINE_ERROR(DegenerateFit)
RECLAB_DEFINE_ERROR(VerificationFailed)
RECLAB_DEFINE_ERROR(InvalidArgument)

#undef RECLAB_DEFINE_ERROR

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error(ErrorKind::kParseError,
              "at position " + std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace reclab
