#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace llema {

// Every failure the library reports carries one of these codes; the CLI
// prints the code name in its JSON diagnostics.
enum class Errc {
  EmptyComposition,
  MalformedFormula,
  DegenerateCell,
  MissingTag,
  MalformedNumber,
  UnknownElement,
  InvalidLattice,
  InvalidSite,
  ValidationError,
  PromptOnlyRule,
  NoValidSubstitute,
  UnknownTask,
  InvalidConstraint,
  InvalidConfig,
  ZeroSeebeck,
  NoJsonFound,
  GeneratorUnavailable,
  ExhaustedAttempts,
  TransportError,
  IoError,
  CorruptStream,
};

constexpr std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyComposition: return "EmptyComposition";
    case Errc::MalformedFormula: return "MalformedFormula";
    case Errc::DegenerateCell: return "DegenerateCell";
    case Errc::MissingTag: return "MissingTag";
    case Errc::MalformedNumber: return "MalformedNumber";
    case Errc::UnknownElement: return "UnknownElement";
    case Errc::InvalidLattice: return "InvalidLattice";
    case Errc::InvalidSite: return "InvalidSite";
    case Errc::ValidationError: return "ValidationError";
    case Errc::PromptOnlyRule: return "PromptOnlyRule";
    case Errc::NoValidSubstitute: return "NoValidSubstitute";
    case Errc::UnknownTask: return "UnknownTask";
    case Errc::InvalidConstraint: return "InvalidConstraint";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::ZeroSeebeck: return "ZeroSeebeck";
    case Errc::NoJsonFound: return "NoJsonFound";
    case Errc::GeneratorUnavailable: return "GeneratorUnavailable";
    case Errc::ExhaustedAttempts: return "ExhaustedAttempts";
    case Errc::TransportError: return "TransportError";
    case Errc::IoError: return "IoError";
    case Errc::CorruptStream: return "CorruptStream";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

// Raised when a generated payload cannot become a Structure. `reason()` is
// the machine-readable cause (InvalidLattice, UnknownElement, ...).
class ValidationError : public Error {
 public:
  ValidationError(Errc reason, const std::string& detail)
      : Error(Errc::ValidationError, std::string(errc_name(reason)) + ": " + detail),
        reason_(reason) {}

  Errc reason() const noexcept { return reason_; }

 private:
  Errc reason_;
};

}  // namespace llema
