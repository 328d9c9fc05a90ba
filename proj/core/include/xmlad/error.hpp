#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace xmlad {

enum class Errc {
  MalformedSchema,
  UnsupportedConstruct,
  MalformedXml,
  ValueParseError,
  EmptyCorpus,
  SchemaMismatch,
  TooFewRows,
  NonFiniteData,
  DimensionMismatch,
  NoEligibleTarget,
  SingleClass,
  LengthMismatch,
  DegenerateMatrix,
  MissingParams,
  VersionMismatch,
  CorruptFile,
  UsageError,
  IoError,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the Errc codes so the
/// CLI can map it onto an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace xmlad
