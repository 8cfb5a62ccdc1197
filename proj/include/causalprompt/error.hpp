#pragma once

// Single error type for the whole library: every throwing operation raises
// causalprompt::Error with a machine-readable code and a human message.

#include <stdexcept>
#include <string>
#include <utility>

namespace causalprompt {

enum class Errc {
  // inputs and configuration
  EmptyText,
  RoleMismatch,
  MissingField,
  ConfigError,
  // prompt compilation
  InterventionConflict,
  UnsupportedCombination,
  ShotMismatch,
  // data files
  ParseError,
  MappingError,
  // completion service
  ProviderError,
  ReplayMiss,
  // extraction
  EmptyExtraction,
  UnterminatedLiteral,
  // metrics and analysis
  EmptyCorpus,
  LengthMismatch,
  NoAnnotations,
  NoOverlap,
  ConfigMismatch,
  InstanceMismatch,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::EmptyText: return "EmptyText";
    case Errc::RoleMismatch: return "RoleMismatch";
    case Errc::MissingField: return "MissingField";
    case Errc::ConfigError: return "ConfigError";
    case Errc::InterventionConflict: return "InterventionConflict";
    case Errc::UnsupportedCombination: return "UnsupportedCombination";
    case Errc::ShotMismatch: return "ShotMismatch";
    case Errc::ParseError: return "ParseError";
    case Errc::MappingError: return "MappingError";
    case Errc::ProviderError: return "ProviderError";
    case Errc::ReplayMiss: return "ReplayMiss";
    case Errc::EmptyExtraction: return "EmptyExtraction";
    case Errc::UnterminatedLiteral: return "UnterminatedLiteral";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::NoAnnotations: return "NoAnnotations";
    case Errc::NoOverlap: return "NoOverlap";
    case Errc::ConfigMismatch: return "ConfigMismatch";
    case Errc::InstanceMismatch: return "InstanceMismatch";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code),
        message_(message) {}

  Errc code() const noexcept { return code_; }
  // The text without the code prefix, for callers that re-wrap with context.
  const std::string& message() const noexcept { return message_; }

 private:
  Errc code_;
  std::string message_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) { throw Error(code, message); }

// Process exit code for CLI front ends: 1 usage/config, 2 provider, 3 data.
inline int exit_code_for(Errc c) {
  switch (c) {
    case Errc::ProviderError:
    case Errc::ReplayMiss:
      return 2;
    case Errc::ConfigError:
      return 1;
    default:
      return 3;
  }
}

}  // namespace causalprompt
