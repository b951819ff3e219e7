// End-to-end run: ingest -> evidence join -> classify -> analytics -> bundle.
#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "oa/model.hpp"
#include "oa/report.hpp"

namespace oa {

// Raised when the share of schema-violating lines in an input exceeds the
// configured ceiling.
class SchemaViolationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InputPaths {
  std::vector<std::string> evidence;  // one or more dump shards, optionally gzipped
  std::string publications;
  std::string institutions;
  std::string journals;
  std::optional<std::string> apc;
  std::optional<std::string> country_names;
  std::optional<std::string> country_regions;
};

enum class Section : std::uint8_t { Classification, Aggregate, RepoMatch, PmcReport, GoldModel };

inline const std::set<Section> kAllSections = {Section::Classification, Section::Aggregate, Section::RepoMatch,
                                               Section::PmcReport, Section::GoldModel};

struct RunOptions {
  std::set<Section> sections = kAllSections;
  std::size_t shards = 1;
  report::Format format = report::Format::Csv;
  std::string out_dir;                   // empty: do not write
  std::optional<std::string> issue_log;  // full issue log (CSV)
  double max_issue_rate = 0.10;          // per input, schema violations / data lines
};

struct PipelineResult {
  report::ReportBundle bundle;
  report::IssueSummary issues;
};

// Throws IoError (missing/unreadable input, unwritable output), ConfigError
// and SchemaViolationError. Output is byte-identical for any shard count.
PipelineResult run_pipeline(const PipelineConfig& config, const InputPaths& inputs, const RunOptions& options);

}  // namespace oa
