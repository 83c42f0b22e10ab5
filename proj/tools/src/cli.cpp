#include "cpufp_cli/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "cpufp/error.hpp"
#include "cpufp/ingest.hpp"
#include "cpufp/preprocess.hpp"
#include "cpufp/refdb.hpp"
#include "cpufp/report.hpp"
#include "cpufp/synth.hpp"
#include "cpufp/workflow.hpp"

namespace cpufp::cli {

namespace {

namespace fs = std::filesystem;

/// Thrown for problems with the command line itself (exit 1).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PreprocessingFlags {
  std::string metric = "busy";
  int order = 6;
  double ripple_db = 0.5;
  double cutoff = 0.1;
  bool no_zero_phase = false;
  std::vector<CLI::Option*> options;

  void attach(CLI::App& app) {
    options.push_back(app.add_option("--metric", metric, "utilization column(s) read from sar logs")
                          ->check(CLI::IsMember({"busy", "usersys", "user"}))
                          ->capture_default_str());
    options.push_back(app.add_option("--order", order, "Chebyshev filter order")
                          ->check(CLI::PositiveNumber)
                          ->capture_default_str());
    options.push_back(app.add_option("--ripple-db", ripple_db, "passband ripple in dB")
                          ->check(CLI::PositiveNumber)
                          ->capture_default_str());
    options.push_back(app.add_option("--cutoff", cutoff, "cutoff as a fraction of Nyquist, in (0, 1)")
                          ->check(CLI::Range(0.0, 1.0))
                          ->capture_default_str());
    options.push_back(
        app.add_flag("--no-zero-phase", no_zero_phase, "filter forward only (default: forward-backward)"));
  }

  bool any_given() const {
    return std::any_of(options.begin(), options.end(), [](const CLI::Option* o) { return o->count() > 0; });
  }

  Preprocessing resolve() const {
    Preprocessing p;
    p.metric = *parse_metric(metric);
    p.filter = FilterSpec{order, ripple_db, cutoff, !no_zero_phase};
    try {
      validate(p.filter);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    return p;
  }
};

struct InputFlags {
  std::vector<std::string> files;
  std::vector<std::string> params;
  std::string manifest;

  void attach(CLI::App& app, const char* what) {
    app.add_option("files", files, what);
    app.add_option("--params", params,
                   "M,R,FS,I for the matching input file; repeat once per file in order")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
        ->expected(1)
        ->allow_extra_args(false);
    app.add_option("--manifest", manifest,
                   "file with one 'path M R FS I' line per trace; paths relative to the manifest; "
                   "overrides --params for the same file")
        ->check(CLI::ExistingFile);
  }
};

ConfigParams parse_params(const std::string& text) {
  std::string normalized = text;
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::istringstream in(normalized);
  ConfigParams p;
  std::string rest;
  if (!(in >> p.mappers >> p.reducers >> p.fs_split_mb >> p.input_mb) || (in >> rest)) {
    throw UsageError(fmt::format("--params expects M,R,FS,I, got '{}'", text));
  }
  try {
    validate(p);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return p;
}

struct LabeledFile {
  std::string path;
  ConfigParams params;
};

std::vector<LabeledFile> resolve_inputs(const InputFlags& flags) {
  std::vector<LabeledFile> out;
  if (flags.manifest.empty() && flags.params.size() != flags.files.size()) {
    throw UsageError(fmt::format("{} input file(s) but {} --params value(s)", flags.files.size(),
                                 flags.params.size()));
  }
  for (std::size_t k = 0; k < flags.files.size(); ++k) {
    if (k < flags.params.size()) {
      out.push_back({flags.files[k], parse_params(flags.params[k])});
    } else {
      out.push_back({flags.files[k], ConfigParams{0, 0, 0, 0}});
    }
  }

  if (!flags.manifest.empty()) {
    std::ifstream in(flags.manifest);
    if (!in) throw Error(Errc::Io, "cannot read manifest " + flags.manifest);
    const fs::path base = fs::path(flags.manifest).parent_path();
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream row(line);
      std::string path;
      if (!(row >> path)) continue;
      ConfigParams p;
      std::string rest;
      if (!(row >> p.mappers >> p.reducers >> p.fs_split_mb >> p.input_mb) || (row >> rest)) {
        throw UsageError(fmt::format("{} line {}: expected 'path M R FS I'", flags.manifest, line_no));
      }
      try {
        validate(p);
      } catch (const Error& e) {
        throw UsageError(fmt::format("{} line {}: {}", flags.manifest, line_no, e.what()));
      }
      const std::string resolved = fs::path(path).is_absolute() ? path : (base / path).string();
      auto same = [&](const LabeledFile& f) {
        std::error_code ec;
        return f.path == resolved || fs::equivalent(f.path, resolved, ec);
      };
      if (auto it = std::find_if(out.begin(), out.end(), same); it != out.end()) {
        it->params = p;
      } else {
        out.push_back({resolved, p});
      }
    }
  }

  for (const auto& f : out) {
    if (f.params.mappers == 0) {
      throw UsageError(fmt::format("no configuration parameters for {}", f.path));
    }
  }
  if (out.empty()) throw UsageError("no input traces given");
  return out;
}

std::vector<ConfiguredTrace> load_traces(const std::vector<LabeledFile>& files, UtilizationMetric metric) {
  std::vector<ConfiguredTrace> runs;
  runs.reserve(files.size());
  for (const auto& f : files) {
    try {
      runs.push_back({f.params, load_trace_file(f.path, metric)});
    } catch (const Error& e) {
      throw e.with_context(f.path);
    }
  }
  return runs;
}

// Settings the command should run with, given an optional existing database.
std::optional<Preprocessing> requested(const PreprocessingFlags& flags) {
  if (!flags.any_given()) return std::nullopt;
  return flags.resolve();
}

int cmd_profile(const std::string& db_path, const std::string& app_id, const InputFlags& inputs,
                const PreprocessingFlags& pre, std::ostream& out) {
  const auto files = resolve_inputs(inputs);
  ReferenceDb db;
  if (fs::exists(db_path)) {
    db = db_load_file(db_path);
    if (auto want = requested(pre); want && *want != db.preprocessing()) {
      throw Error(Errc::PreprocessingMismatch,
                  fmt::format("requested [{}] but {} was built with [{}]", to_string(*want), db_path,
                              to_string(db.preprocessing())));
    }
  } else {
    db = ReferenceDb(pre.resolve());
  }
  const auto runs = load_traces(files, db.preprocessing().metric);
  const std::size_t before = db.size();
  db = profile_application(app_id, runs, std::move(db));
  db_save_file(db, db_path);
  fmt::print(out, "profiled {}: {} run(s) added, {} entries in {}\n", app_id, db.size() - before,
             db.size(), db_path);
  fmt::print(out, "preprocessing: {}\n", to_string(db.preprocessing()));
  return kExitOk;
}

int cmd_match(const std::string& db_path, const InputFlags& inputs, const PreprocessingFlags& pre,
              double threshold, const std::string& format, std::ostream& out) {
  if (!(threshold > 0.0)) throw UsageError("--threshold must lie in (0, 1]");
  const auto files = resolve_inputs(inputs);
  const auto db = db_load_file(db_path);
  const auto want = requested(pre);
  const auto metric = want ? want->metric : db.preprocessing().metric;
  const auto runs = load_traces(files, metric);
  const auto report = match_application(runs, db, threshold, want);
  if (format == "machine") {
    out << render_machine(report);
  } else {
    out << render_table(report);
  }
  return kExitOk;
}

int cmd_compare(const std::string& a, const std::string& b, const PreprocessingFlags& pre,
                std::ostream& out) {
  const auto settings = pre.resolve();
  const auto query = load_trace_file(a, settings.metric);
  const auto reference = load_trace_file(b, settings.metric);
  const auto result = compare_pair(query, reference, settings.filter);
  fmt::print(out, "preprocessing: {}\n", to_string(settings));
  fmt::print(out, "query: {} ({} samples)\n", a, query.size());
  fmt::print(out, "reference: {} ({} samples)\n", b, reference.size());
  fmt::print(out, "distance={:.6f} corr={:.4f} path_length={}\n", result.distance, result.corr,
             result.path_length);
  return kExitOk;
}

int cmd_synth(const SynthSpec& spec, const std::string& output, std::ostream& out) {
  const auto series = generate(spec);
  std::string text = "cpu\n";
  for (double v : series.samples()) text += fmt::format("{:.6f}\n", v);
  if (output.empty() || output == "-") {
    out << text;
    return kExitOk;
  }
  std::ofstream file(output, std::ios::binary | std::ios::trunc);
  if (!file || !(file << text)) throw Error(Errc::Io, "cannot write " + output);
  return kExitOk;
}

int cmd_db(const std::string& db_path, std::ostream& out) {
  const auto db = db_load_file(db_path);
  fmt::print(out, "database: {}\n", db_path);
  fmt::print(out, "format_version: {}\n", db.format_version());
  fmt::print(out, "preprocessing: {}\n", to_string(db.preprocessing()));
  fmt::print(out, "entries: {}\n", db.size());
  for (const auto& e : db.entries()) {
    fmt::print(out, "  {}  {}  samples={} interval={}s\n", e.app_id, to_string(e.params),
               e.series.size(), e.series.sample_interval());
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cpufp: match CPU utilization patterns of MapReduce jobs against a reference database"};
  app.name("cpufp");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "show help for every subcommand");

  std::string db_path;
  std::string app_id;
  double threshold = kDefaultThreshold;
  std::string format = "table";

  auto* profile = app.add_subcommand("profile", "add an application's traces to a reference database");
  PreprocessingFlags profile_pre;
  InputFlags profile_inputs;
  profile->add_option("--db", db_path, "reference database file (created if missing)")->required();
  profile->add_option("--app", app_id, "application id")->required();
  profile_inputs.attach(*profile, "trace files (sar text or one value per line)");
  profile_pre.attach(*profile);

  auto* match = app.add_subcommand("match", "find the most similar known application");
  PreprocessingFlags match_pre;
  InputFlags match_inputs;
  match->add_option("--db", db_path, "reference database file")->required()->check(CLI::ExistingFile);
  match_inputs.attach(*match, "query trace files");
  match->add_option("--threshold", threshold, "minimum corr for a configuration winner")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  match->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"table", "machine"}))
      ->capture_default_str();
  match_pre.attach(*match);

  auto* compare = app.add_subcommand("compare", "run the pipeline on two traces and print the result");
  PreprocessingFlags compare_pre;
  std::string file_a;
  std::string file_b;
  compare->add_option("query", file_a, "query trace")->required();
  compare->add_option("reference", file_b, "reference trace")->required();
  compare_pre.attach(*compare);

  auto* synth = app.add_subcommand("synth", "write a synthetic MapReduce-shaped trace as CSV");
  SynthSpec spec;
  std::string family = "wordcount";
  std::string output = "-";
  synth->add_option("--family", family, "shape family")
      ->check(CLI::IsMember({"wordcount", "terasort", "exim"}))
      ->capture_default_str();
  synth->add_option("--mappers", spec.params.mappers, "number of mappers")
      ->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--reducers", spec.params.reducers, "number of reducers")
      ->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--fs", spec.params.fs_split_mb, "filesystem split size in MB")
      ->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--input", spec.params.input_mb, "input size in MB")
      ->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--duration", spec.duration_s, "trace length in seconds (>= 60)")
      ->check(CLI::Range(std::int64_t{60}, std::int64_t{1} << 40))
      ->capture_default_str();
  synth->add_option("--noise", spec.noise_amplitude, "uniform noise amplitude in percent points")
      ->check(CLI::Range(0.0, 50.0))
      ->capture_default_str();
  synth->add_option("--seed", spec.seed, "noise seed")->capture_default_str();
  synth->add_option("-o,--output", output, "output CSV path, '-' for stdout")->capture_default_str();

  auto* db_cmd = app.add_subcommand("db", "inspect a reference database");
  db_cmd->add_option("--db", db_path, "reference database file")->required()->check(CLI::ExistingFile);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*profile) return cmd_profile(db_path, app_id, profile_inputs, profile_pre, out);
    if (*match) return cmd_match(db_path, match_inputs, match_pre, threshold, format, out);
    if (*compare) return cmd_compare(file_a, file_b, compare_pre, out);
    if (*synth) {
      spec.family = *parse_family(family);
      return cmd_synth(spec, output, out);
    }
    if (*db_cmd) return cmd_db(db_path, out);
  } catch (const UsageError& e) {
    fmt::print(err, "usage error: {}\n", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace cpufp::cli
