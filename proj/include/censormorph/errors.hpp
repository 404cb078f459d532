#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace censormorph {

/// Broad failure class; the CLI maps it onto its exit code.
enum class ErrorCategory { usage, data, numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

#define CENSORMORPH_DEFINE_ERROR(Name, Category)                   \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& what)                         \
        : Error(ErrorCategory::Category, #Name ": " + what) {}     \
  }

// Ingestion and data-shape errors.
CENSORMORPH_DEFINE_ERROR(DuplicateEntry, data);
CENSORMORPH_DEFINE_ERROR(EmptyManifest, data);
CENSORMORPH_DEFINE_ERROR(EmptyFile, data);
CENSORMORPH_DEFINE_ERROR(HemisphereMismatch, data);
CENSORMORPH_DEFINE_ERROR(EmptyCollection, data);
CENSORMORPH_DEFINE_ERROR(SingleGroup, data);
CENSORMORPH_DEFINE_ERROR(TooFewGroups, data);
CENSORMORPH_DEFINE_ERROR(EmptyGroup, data);
CENSORMORPH_DEFINE_ERROR(InsufficientGroupSize, data);
CENSORMORPH_DEFINE_ERROR(EmptyInput, data);
CENSORMORPH_DEFINE_ERROR(ZeroVariance, data);
CENSORMORPH_DEFINE_ERROR(InsufficientData, data);
CENSORMORPH_DEFINE_ERROR(ZeroSpread, data);
CENSORMORPH_DEFINE_ERROR(OutOfRange, data);
CENSORMORPH_DEFINE_ERROR(InvalidCounts, data);

// Bad parameters supplied by the caller.
CENSORMORPH_DEFINE_ERROR(InvalidRange, usage);
CENSORMORPH_DEFINE_ERROR(InvalidParameter, usage);
CENSORMORPH_DEFINE_ERROR(InvalidBandwidth, usage);
CENSORMORPH_DEFINE_ERROR(EtaOutOfRange, usage);
CENSORMORPH_DEFINE_ERROR(InvalidParams, usage);
CENSORMORPH_DEFINE_ERROR(ConfigError, usage);

CENSORMORPH_DEFINE_ERROR(NumericalFailure, numerical);

#undef CENSORMORPH_DEFINE_ERROR

/// Malformed input text. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(ErrorCategory::data,
              "ParseError" + (line ? " (line " + std::to_string(line) + ")" : std::string{}) +
                  ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace censormorph
