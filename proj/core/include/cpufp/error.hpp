#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cpufp {

enum class Errc {
  InvalidArgument,
  EmptyTrace,
  NonMonotonicTimestamps,
  MalformedLine,
  InvalidSpec,
  TraceTooShort,
  ConstantTrace,
  EmptySeries,
  LengthMismatch,
  ZeroVariance,
  DuplicateEntry,
  StageViolation,
  MalformedDocument,
  UnsupportedVersion,
  EmptyDatabase,
  PreprocessingMismatch,
  Io,
};

/// Stable identifier used in messages and the CLI ("ConstantTrace", ...).
std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library. `detail` carries the single numeric
/// payload some kinds have: the 1-based line for MalformedLine, the minimum
/// length for TraceTooShort, the byte offset for MalformedDocument and the
/// version found for UnsupportedVersion.
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& message,
        std::optional<std::int64_t> detail = std::nullopt);

  Errc code() const noexcept { return code_; }
  std::optional<std::int64_t> detail() const noexcept { return detail_; }

  /// Same error with `context` prepended to the message.
  Error with_context(std::string_view context) const;

private:
  Errc code_;
  std::optional<std::int64_t> detail_;
};

}  // namespace cpufp
