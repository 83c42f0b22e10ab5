#include "cpufp/refdb.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

#include "cpufp/error.hpp"

namespace cpufp {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kFormatTag = "cpufp-refdb";

Json to_json(const ConfigParams& p) {
  return Json{{"mappers", p.mappers},
              {"reducers", p.reducers},
              {"fs_split_mb", p.fs_split_mb},
              {"input_mb", p.input_mb}};
}

Json to_json(const Preprocessing& p) {
  return Json{{"metric", std::string(metric_name(p.metric))},
              {"filter",
               {{"family", "chebyshev1"},
                {"order", p.filter.order},
                {"passband_ripple_db", p.filter.passband_ripple_db},
                {"cutoff_norm", p.filter.cutoff_norm},
                {"zero_phase", p.filter.zero_phase}}}};
}

[[noreturn]] void malformed(const std::string& what) {
  throw Error(Errc::MalformedDocument, what);
}

const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) malformed(fmt::format("{} is not an object", where));
  auto it = obj.find(key);
  if (it == obj.end()) malformed(fmt::format("{} lacks \"{}\"", where, key));
  return *it;
}

template <typename T>
T get(const Json& obj, const char* key, const std::string& where) {
  const Json& v = field(obj, key, where);
  try {
    if constexpr (std::is_same_v<T, std::int64_t>) {
      if (!v.is_number_integer()) malformed(fmt::format("{}.{} is not an integer", where, key));
    } else if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) malformed(fmt::format("{}.{} is not a number", where, key));
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) malformed(fmt::format("{}.{} is not a boolean", where, key));
    } else {
      if (!v.is_string()) malformed(fmt::format("{}.{} is not a string", where, key));
    }
    return v.get<T>();
  } catch (const nlohmann::json::exception& e) {
    malformed(fmt::format("{}.{}: {}", where, key, e.what()));
  }
}

ConfigParams params_from_json(const Json& j, const std::string& where) {
  ConfigParams p{get<std::int64_t>(j, "mappers", where), get<std::int64_t>(j, "reducers", where),
                 get<std::int64_t>(j, "fs_split_mb", where), get<std::int64_t>(j, "input_mb", where)};
  try {
    validate(p);
  } catch (const Error& e) {
    malformed(fmt::format("{}: {}", where, e.what()));
  }
  return p;
}

Preprocessing preprocessing_from_json(const Json& j) {
  const std::string where = "preprocessing";
  Preprocessing p;
  const auto metric = get<std::string>(j, "metric", where);
  if (auto m = parse_metric(metric)) {
    p.metric = *m;
  } else {
    malformed(fmt::format("unknown metric \"{}\"", metric));
  }
  const Json& f = field(j, "filter", where);
  const std::string fwhere = "preprocessing.filter";
  if (get<std::string>(f, "family", fwhere) != "chebyshev1") {
    malformed("unsupported filter family");
  }
  p.filter.order = static_cast<int>(get<std::int64_t>(f, "order", fwhere));
  p.filter.passband_ripple_db = get<double>(f, "passband_ripple_db", fwhere);
  p.filter.cutoff_norm = get<double>(f, "cutoff_norm", fwhere);
  p.filter.zero_phase = get<bool>(f, "zero_phase", fwhere);
  try {
    validate(p.filter);
  } catch (const Error& e) {
    malformed(fmt::format("{}: {}", fwhere, e.what()));
  }
  return p;
}

}  // namespace

std::string to_string(const Preprocessing& p) {
  return fmt::format("metric={} order={} ripple_db={} cutoff={} zero_phase={}",
                     metric_name(p.metric), p.filter.order, p.filter.passband_ripple_db,
                     p.filter.cutoff_norm, p.filter.zero_phase ? "true" : "false");
}

void ReferenceDb::add(ProfileEntry entry) {
  if (entry.app_id.empty()) throw Error(Errc::InvalidArgument, "app id must not be empty");
  // App ids appear unquoted in key=value reports.
  if (std::any_of(entry.app_id.begin(), entry.app_id.end(), [](char c) {
        return std::isspace(static_cast<unsigned char>(c)) || c == '=';
      })) {
    throw Error(Errc::InvalidArgument,
                fmt::format("app id \"{}\" must not contain whitespace or '='", entry.app_id));
  }
  validate(entry.params);
  if (entry.series.stage() != Stage::Normalized) {
    throw Error(Errc::StageViolation,
                fmt::format("{} ({}): database entries must be normalized, got {}", entry.app_id,
                            to_string(entry.params), stage_name(entry.series.stage())));
  }
  if (contains(entry.app_id, entry.params)) {
    throw Error(Errc::DuplicateEntry, fmt::format("{} ({}) is already in the database",
                                                  entry.app_id, to_string(entry.params)));
  }
  entries_.push_back(std::move(entry));
}

bool ReferenceDb::contains(const std::string& app_id, const ConfigParams& params) const noexcept {
  return std::any_of(entries_.begin(), entries_.end(), [&](const ProfileEntry& e) {
    return e.app_id == app_id && e.params == params;
  });
}

std::vector<std::string> ReferenceDb::app_ids() const {
  std::vector<std::string> ids;
  for (const auto& e : entries_) {
    if (std::find(ids.begin(), ids.end(), e.app_id) == ids.end()) ids.push_back(e.app_id);
  }
  return ids;
}

ReferenceDb db_add(ReferenceDb db, ProfileEntry entry) {
  db.add(std::move(entry));
  return db;
}

std::vector<ProfileEntry> db_query(const ReferenceDb& db, const ConfigParams& params) {
  std::vector<ProfileEntry> out;
  for (const auto& e : db.entries()) {
    if (e.params == params) out.push_back(e);
  }
  return out;
}

void db_save(const ReferenceDb& db, std::ostream& out) {
  Json doc;
  doc["format"] = kFormatTag;
  doc["format_version"] = db.format_version();
  doc["preprocessing"] = to_json(db.preprocessing());
  Json entries = Json::array();
  for (const auto& e : db.entries()) {
    entries.push_back(Json{{"app_id", e.app_id},
                           {"params", to_json(e.params)},
                           {"sample_interval", e.series.sample_interval()},
                           {"source", e.series.source()},
                           {"samples", std::vector<double>(e.series.samples().begin(),
                                                           e.series.samples().end())}});
  }
  doc["entries"] = std::move(entries);
  out << doc.dump(2) << '\n';
  if (!out) throw Error(Errc::Io, "failed to write reference database");
}

ReferenceDb db_load(std::istream& in) {
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::MalformedDocument, fmt::format("parse error at byte {}: {}", e.byte, e.what()),
                static_cast<std::int64_t>(e.byte));
  }
  const std::string root = "document";
  if (get<std::string>(doc, "format", root) != kFormatTag) malformed("not a cpufp reference database");
  const auto version = get<std::int64_t>(doc, "format_version", root);
  if (version != kRefDbFormatVersion) {
    throw Error(Errc::UnsupportedVersion,
                fmt::format("format_version {} is not supported (expected {})", version,
                            kRefDbFormatVersion),
                version);
  }
  ReferenceDb db(preprocessing_from_json(field(doc, "preprocessing", root)));
  const Json& entries = field(doc, "entries", root);
  if (!entries.is_array()) malformed("entries is not an array");
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const std::string where = fmt::format("entries[{}]", k);
    const Json& e = entries[k];
    const auto app_id = get<std::string>(e, "app_id", where);
    const auto params = params_from_json(field(e, "params", where), where + ".params");
    const auto interval = get<double>(e, "sample_interval", where);
    const auto source = get<std::string>(e, "source", where);
    const Json& samples_json = field(e, "samples", where);
    if (!samples_json.is_array()) malformed(where + ".samples is not an array");
    std::vector<double> samples;
    samples.reserve(samples_json.size());
    for (const auto& v : samples_json) {
      if (!v.is_number()) malformed(where + ".samples holds a non-number");
      samples.push_back(v.get<double>());
    }
    try {
      db.add(ProfileEntry{app_id, params,
                          CpuTimeSeries(std::move(samples), interval, Stage::Normalized, source)});
    } catch (const Error& err) {
      throw Error(Errc::MalformedDocument, fmt::format("{}: {}", where, err.what()));
    }
  }
  return db;
}

void db_save_file(const ReferenceDb& db, const std::string& path) {
  // Write to a sibling and rename so a failed save leaves the old file intact.
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::Io, "cannot write " + tmp);
    db_save(db, out);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(Errc::Io, fmt::format("cannot replace {}: {}", path, ec.message()));
}

ReferenceDb db_load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read reference database " + path);
  return db_load(in);
}

}  // namespace cpufp
