#include "xmlad/error.hpp"

namespace xmlad {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::MalformedSchema: return "MalformedSchema";
    case Errc::UnsupportedConstruct: return "UnsupportedConstruct";
    case Errc::MalformedXml: return "MalformedXml";
    case Errc::ValueParseError: return "ValueParseError";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::SchemaMismatch: return "SchemaMismatch";
    case Errc::TooFewRows: return "TooFewRows";
    case Errc::NonFiniteData: return "NonFiniteData";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NoEligibleTarget: return "NoEligibleTarget";
    case Errc::SingleClass: return "SingleClass";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::DegenerateMatrix: return "DegenerateMatrix";
    case Errc::MissingParams: return "MissingParams";
    case Errc::VersionMismatch: return "VersionMismatch";
    case Errc::CorruptFile: return "CorruptFile";
    case Errc::UsageError: return "UsageError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace xmlad
