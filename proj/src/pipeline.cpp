#include "oa/pipeline.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>
#include <unordered_set>

#include "oa/classifier.hpp"
#include "oa/csv.hpp"
#include "oa/gold_models.hpp"
#include "oa/indicators.hpp"
#include "oa/ingest.hpp"
#include "oa/repo_analytics.hpp"

namespace oa {

namespace {

namespace fs = std::filesystem;
using ingest::IssueKind;
using ingest::ParseIssue;
using ingest::ParseStats;

void require_file(const std::string& path, std::string_view role) {
  std::error_code ec;
  if (path.empty() || !fs::is_regular_file(path, ec)) {
    throw IoError(fmt::format("missing {} input file: '{}'", role, path));
  }
}

// Collects issues and per-source line counts for the ceiling check.
class IssueCollector {
 public:
  void add(ParseIssue issue) { issues_.push_back(std::move(issue)); }
  void add_all(std::vector<ParseIssue>&& issues) {
    for (auto& i : issues) issues_.push_back(std::move(i));
  }
  void record_lines(const std::string& source, std::size_t lines) { lines_[source] += lines; }
  ingest::IssueSink sink() {
    return [this](ParseIssue issue) { add(std::move(issue)); };
  }

  [[nodiscard]] report::IssueSummary summary() const {
    report::IssueSummary out;
    for (const auto& i : issues_) ++out[{i.source, i.kind}];
    return out;
  }

  void check_ceiling(double max_rate) const {
    std::map<std::string, std::size_t> violations;
    for (const auto& i : issues_) {
      if (ingest::is_schema_violation(i.kind)) ++violations[i.source];
    }
    for (const auto& [source, count] : violations) {
      const auto lines = lines_.contains(source) ? lines_.at(source) : count;
      const double rate = lines == 0 ? 1.0 : static_cast<double>(count) / static_cast<double>(lines);
      if (rate > max_rate) {
        throw SchemaViolationError(fmt::format("{}: {} of {} lines violate the input schema ({:.1f}% > {:.1f}%)",
                                               source, count, lines, rate * 100.0, max_rate * 100.0));
      }
    }
  }

  void write_log(const std::string& path) {
    std::sort(issues_.begin(), issues_.end(), [](const ParseIssue& a, const ParseIssue& b) {
      return std::tie(a.source, a.line_no, a.kind, a.detail) < std::tie(b.source, b.line_no, b.kind, b.detail);
    });
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write issue log '{}'", path));
    out << "source,line_no,kind,detail\n";
    for (const auto& i : issues_) {
      out << csv::join_record({i.source, std::to_string(i.line_no), std::string(ingest::issue_kind_name(i.kind)),
                               i.detail})
          << '\n';
    }
  }

 private:
  std::vector<ParseIssue> issues_;
  std::map<std::string, std::size_t> lines_;
};

struct EvidenceShard {
  std::string source;
  std::unordered_map<std::string, std::pair<OAEvidenceRecord, std::size_t>> records;
  std::vector<ParseIssue> issues;
  ParseStats stats;
};

// Streams one dump file keeping only evidence for DOIs the publication table
// references, so memory is bounded by the publication set, not the dump.
void load_evidence_shard(const std::string& path, const std::unordered_set<std::string>& wanted,
                         EvidenceShard& shard) {
  GzLineSource in(path);
  std::size_t line_no = 0;
  shard.stats = ingest::parse_evidence_stream(
      in, shard.source,
      [&](OAEvidenceRecord&& rec) {
        line_no = in.line_no();
        if (!wanted.contains(rec.doi)) return;
        auto doi = rec.doi;
        const auto [it, inserted] = shard.records.try_emplace(std::move(doi), std::move(rec), line_no);
        if (!inserted) {
          shard.issues.push_back({shard.source, line_no, IssueKind::DuplicateKey,
                                  fmt::format("duplicate doi '{}' (first at line {})", it->first, it->second.second)});
        }
      },
      [&](ParseIssue issue) { shard.issues.push_back(std::move(issue)); });
}

template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> threads;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config, const InputPaths& inputs, const RunOptions& options) {
  config.validate();
  if (options.shards < 1) throw ConfigError("--shards must be >= 1");
  if (options.max_issue_rate < 0.0 || options.max_issue_rate > 1.0) {
    throw ConfigError("--max-issue-rate must lie in [0, 1]");
  }
  if (inputs.evidence.empty()) throw ConfigError("at least one evidence file is required");
  for (const auto& path : inputs.evidence) require_file(path, "evidence");
  require_file(inputs.publications, "publications");
  require_file(inputs.institutions, "institutions");
  require_file(inputs.journals, "journals");
  if (inputs.apc) require_file(*inputs.apc, "apc");
  if (inputs.country_names) require_file(*inputs.country_names, "country names");
  if (inputs.country_regions) require_file(*inputs.country_regions, "country regions");

  IssueCollector issues;

  // Registries.
  ingest::CountryRegions region_table;
  if (inputs.country_regions) {
    GzLineSource in(*inputs.country_regions);
    region_table = ingest::parse_country_regions(in, "country_regions", issues.sink());
  }
  ingest::ApcList apc;
  if (inputs.apc) {
    GzLineSource in(*inputs.apc);
    apc = ingest::parse_apc_list(in, "apc", issues.sink());
  }
  gold::CountryLookup lookup = gold::default_country_lookup();
  if (inputs.country_names) {
    GzLineSource in(*inputs.country_names);
    gold::load_country_lookup(in, lookup);
  }
  InstitutionTable institutions;
  {
    GzLineSource in(inputs.institutions);
    ParseStats stats;
    institutions = ingest::parse_institutions(in, "institutions", inputs.country_regions ? &region_table : nullptr,
                                              issues.sink(), &stats);
    issues.record_lines("institutions", stats.lines);
  }
  JournalTable journals;
  {
    GzLineSource in(inputs.journals);
    ParseStats stats;
    journals = ingest::parse_journals(in, "journals", inputs.apc ? &apc : nullptr, issues.sink(), &stats);
    issues.record_lines("journals", stats.lines);
  }

  // Publications.
  std::vector<PublicationRecord> publications;
  std::unordered_set<std::string> wanted_dois;
  {
    GzLineSource in(inputs.publications);
    const auto stats = ingest::parse_publications(
        in, "publications", ingest::PublicationFilter{config.period, &institutions},
        [&](PublicationRecord&& pub) {
          if (pub.doi) wanted_dois.insert(*pub.doi);
          publications.push_back(std::move(pub));
        },
        issues.sink());
    issues.record_lines("publications", stats.lines);
  }

  // Evidence join. Shards are parsed concurrently and merged in file order;
  // the first occurrence of a DOI wins.
  std::vector<EvidenceShard> shards(inputs.evidence.size());
  for (std::size_t i = 0; i < shards.size(); ++i) {
    shards[i].source = "evidence:" + fs::path(inputs.evidence[i]).filename().string();
  }
  {
    std::vector<std::exception_ptr> errors(shards.size());
    parallel_for(shards.size(), options.shards, [&](std::size_t i) {
      try {
        load_evidence_shard(inputs.evidence[i], wanted_dois, shards[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  EvidenceIndex evidence;
  for (auto& shard : shards) {
    issues.record_lines(shard.source, shard.stats.lines);
    issues.add_all(std::move(shard.issues));
    // Insert in line order so cross-shard duplicate reports are stable.
    std::vector<std::pair<std::size_t, std::string>> order;
    order.reserve(shard.records.size());
    for (const auto& [doi, rec] : shard.records) order.emplace_back(rec.second, doi);
    std::sort(order.begin(), order.end());
    for (const auto& [line_no, doi] : order) {
      auto& entry = shard.records.at(doi);
      if (!evidence.try_emplace(doi, std::move(entry.first)).second) {
        issues.add({shard.source, line_no, IssueKind::DuplicateKey,
                    fmt::format("doi '{}' already loaded from an earlier evidence file", doi)});
      }
    }
    shard.records.clear();
  }

  issues.check_ceiling(options.max_issue_rate);

  // Classification barrier.
  auto classified = classify_stream(publications, evidence, journals, options.shards);
  evidence.clear();
  publications.clear();
  publications.shrink_to_fit();

  // Mergeable partial aggregates per shard.
  const std::size_t nshards = std::clamp<std::size_t>(options.shards, 1, std::max<std::size_t>(classified.size(), 1));
  const std::size_t chunk = (classified.size() + nshards - 1) / nshards;
  std::vector<indicators::CountTable> partial_counts(nshards);
  std::vector<indicators::OverlapMatrix> partial_overlap(nshards);
  parallel_for(nshards, options.shards, [&](std::size_t s) {
    const std::size_t begin = std::min(s * chunk, classified.size());
    const std::size_t len = std::min(chunk, classified.size() - begin);
    const auto slice = std::span<const ClassifiedPublication>(classified).subspan(begin, len);
    partial_counts[s] = indicators::count_full(slice);
    partial_overlap[s] = indicators::overlap_matrix(slice);
  });
  indicators::CountTable counts;
  indicators::OverlapMatrix overlap;
  for (std::size_t s = 0; s < nshards; ++s) {
    indicators::merge_counts(counts, partial_counts[s]);
    overlap += partial_overlap[s];
  }
  // Institutions in the roster without publications still get (null) cells.
  for (const auto& [id, inst] : institutions) counts[id];

  // Median barrier: every university share exists from here on.
  PipelineResult result;
  auto& tables = result.bundle.tables;
  const auto& sections = options.sections;
  if (sections.contains(Section::Classification)) tables.push_back(report::classification_table(classified));
  if (sections.contains(Section::Aggregate)) {
    const auto cells = indicators::university_indicators(counts, config);
    const auto by_country =
        indicators::median_share_by_country(cells, institutions, config.min_universities_country);
    tables.push_back(report::overlap_table(overlap));
    tables.push_back(report::university_indicator_table(cells));
    tables.push_back(report::country_median_table(by_country, false));
    tables.push_back(report::country_median_table(by_country, true));
    tables.push_back(report::region_median_table(indicators::region_rollup(cells, institutions)));
    tables.push_back(report::field_summary_table(indicators::world_summary(cells)));
    tables.push_back(report::university_profile_table(cells));
  }
  if (sections.contains(Section::RepoMatch)) {
    tables.push_back(report::repo_bounds_table(
        repo::repo_bounds_table(classified, institutions, config.handle_pattern), institutions));
  }
  if (sections.contains(Section::PmcReport)) {
    tables.push_back(report::pmc_table(repo::pmc_overlap_table(classified, institutions, config.pmc_url_patterns)));
  }
  if (sections.contains(Section::GoldModel)) {
    const auto rows =
        gold::gold_country_model(classified, journals, institutions, lookup, config.min_universities_gold_model);
    tables.push_back(report::gold_model_table(rows, false));
    tables.push_back(report::gold_model_table(rows, true));
  }
  result.issues = issues.summary();
  tables.push_back(report::issues_table(result.issues));

  if (!options.out_dir.empty()) report::write_bundle(result.bundle, options.out_dir, options.format);
  if (options.issue_log) issues.write_log(*options.issue_log);
  return result;
}

}  // namespace oa
