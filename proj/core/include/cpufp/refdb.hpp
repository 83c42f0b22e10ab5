#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "cpufp/ingest.hpp"
#include "cpufp/preprocess.hpp"
#include "cpufp/trace_model.hpp"

namespace cpufp {

/// Settings every trace in a database went through before being stored.
struct Preprocessing {
  FilterSpec filter;
  UtilizationMetric metric = UtilizationMetric::BusyTotal;

  friend bool operator==(const Preprocessing&, const Preprocessing&) = default;
};

std::string to_string(const Preprocessing& p);

inline constexpr int kRefDbFormatVersion = 1;

/// Reference database of profiled runs. All entries share one Preprocessing
/// and (app_id, params) is unique.
class ReferenceDb {
public:
  ReferenceDb() = default;
  explicit ReferenceDb(Preprocessing preprocessing) : preprocessing_(preprocessing) {}

  const Preprocessing& preprocessing() const noexcept { return preprocessing_; }
  const std::vector<ProfileEntry>& entries() const noexcept { return entries_; }
  int format_version() const noexcept { return format_version_; }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Throws StageViolation unless the series is Normalized, DuplicateEntry
  /// when (app_id, params) is taken, InvalidArgument for an empty app_id or
  /// non-positive params.
  void add(ProfileEntry entry);

  bool contains(const std::string& app_id, const ConfigParams& params) const noexcept;

  /// Distinct app ids in first-seen order.
  std::vector<std::string> app_ids() const;

  friend bool operator==(const ReferenceDb&, const ReferenceDb&) = default;

private:
  Preprocessing preprocessing_;
  std::vector<ProfileEntry> entries_;
  int format_version_ = kRefDbFormatVersion;
};

ReferenceDb db_add(ReferenceDb db, ProfileEntry entry);

/// Entries whose params equal `params` exactly, in insertion order.
std::vector<ProfileEntry> db_query(const ReferenceDb& db, const ConfigParams& params);

/// JSON document, see docs/refdb-format.md.
void db_save(const ReferenceDb& db, std::ostream& out);

/// Throws MalformedDocument (detail: byte offset for syntax errors) and
/// UnsupportedVersion (detail: version found).
ReferenceDb db_load(std::istream& in);

void db_save_file(const ReferenceDb& db, const std::string& path);
ReferenceDb db_load_file(const std::string& path);

}  // namespace cpufp
