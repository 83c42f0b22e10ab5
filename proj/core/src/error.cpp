#include "cpufp/error.hpp"

#include <fmt/format.h>

namespace cpufp {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::EmptyTrace: return "EmptyTrace";
    case Errc::NonMonotonicTimestamps: return "NonMonotonicTimestamps";
    case Errc::MalformedLine: return "MalformedLine";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::TraceTooShort: return "TraceTooShort";
    case Errc::ConstantTrace: return "ConstantTrace";
    case Errc::EmptySeries: return "EmptySeries";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::DuplicateEntry: return "DuplicateEntry";
    case Errc::StageViolation: return "StageViolation";
    case Errc::MalformedDocument: return "MalformedDocument";
    case Errc::UnsupportedVersion: return "UnsupportedVersion";
    case Errc::EmptyDatabase: return "EmptyDatabase";
    case Errc::PreprocessingMismatch: return "PreprocessingMismatch";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::string compose(Errc code, const std::string& message) {
  return fmt::format("{}: {}", errc_name(code), message);
}

}  // namespace

Error::Error(Errc code, const std::string& message,
             std::optional<std::int64_t> detail)
    : std::runtime_error(compose(code, message)), code_(code), detail_(detail) {}

Error Error::with_context(std::string_view context) const {
  // what() already starts with the kind name; strip it so it is not repeated.
  std::string_view body = what();
  const auto prefix = errc_name(code_);
  if (body.substr(0, prefix.size()) == prefix && body.size() > prefix.size() + 2) {
    body.remove_prefix(prefix.size() + 2);
  }
  return Error(code_, fmt::format("{}: {}", context, body), detail_);
}

}  // namespace cpufp
