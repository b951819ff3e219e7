// Streaming parsers for the four pipeline inputs: the OA evidence dump, the
// publication table, the institution roster and the journal registry.
//
// Every parser is skip-and-report: a defective line yields exactly one
// ParseIssue and never aborts the stream. Only an unreadable input is fatal.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "oa/line_source.hpp"
#include "oa/model.hpp"

namespace oa::ingest {

enum class IssueKind : std::uint8_t {
  Malformed,
  MissingRequiredField,
  DuplicateKey,
  OutOfScope,         // well-formed but filtered (doc type, year)
  DanglingReference,  // reference to an institution missing from the roster
};

std::string_view issue_kind_name(IssueKind kind) noexcept;

// Malformed and missing-field issues count against the schema-violation
// ceiling; the rest are expected filtering.
bool is_schema_violation(IssueKind kind) noexcept;

struct ParseIssue {
  std::string source;
  std::size_t line_no = 1;
  IssueKind kind = IssueKind::Malformed;
  std::string detail;
};

using IssueSink = std::function<void(ParseIssue)>;

struct ParseStats {
  std::size_t lines = 0;     // non-blank data lines examined
  std::size_t records = 0;   // records emitted
  std::size_t rejected = 0;  // lines that produced an issue and no record
};

// ---------------------------------------------------------------------------
// Evidence dump: one JSON object per line, e.g.
//   {"doi": "10.1/a", "journal_is_oa": true, "journal_issn_l": "1234-5678",
//    "oa_locations": [{"host_type": "publisher", "url": "...", "license": "cc-by"}]}
// "locations" is accepted as an alias of "oa_locations". Unknown keys are
// ignored.

using EvidenceLineResult = std::variant<OAEvidenceRecord, ParseIssue>;

EvidenceLineResult parse_evidence_line(std::string_view line, std::size_t line_no,
                                       std::string_view source);

// Blank lines are skipped silently.
ParseStats parse_evidence_stream(LineSource& in, std::string_view source,
                                 const std::function<void(OAEvidenceRecord&&)>& on_record,
                                 const IssueSink& on_issue);

// ---------------------------------------------------------------------------
// Publications: CSV with header
//   pub_id,doi,year,doc_type,language,journal_id,institution_ids,field_ids
// (list columns semicolon-separated), or JSON lines with the same keys. The
// format is chosen from the first non-blank line.

struct PublicationFilter {
  YearRange period;
  // When set, institution ids absent from the roster are dropped from the
  // record with a DanglingReference issue.
  const InstitutionTable* roster = nullptr;
};

ParseStats parse_publications(LineSource& in, std::string_view source,
                              const PublicationFilter& filter,
                              const std::function<void(PublicationRecord&&)>& on_record,
                              const IssueSink& on_issue);

// ---------------------------------------------------------------------------
// Registries

// country,regions  (regions semicolon-separated). Used to fill roster rows
// whose regions column is empty.
using CountryRegions = std::map<std::string, std::vector<std::string>>;

CountryRegions parse_country_regions(LineSource& in, std::string_view source,
                                     const IssueSink& on_issue);

// inst_id,name,country,regions,repo_url_patterns
InstitutionTable parse_institutions(LineSource& in, std::string_view source,
                                    const CountryRegions* region_table,
                                    const IssueSink& on_issue, ParseStats* stats = nullptr);

// issn,has_apc  -- the APC source (e.g. a DOAJ export).
using ApcList = std::map<std::string, ApcStatus>;

ApcList parse_apc_list(LineSource& in, std::string_view source, const IssueSink& on_issue);

// journal_id,issns,country,is_fully_oa,has_apc,publisher_address
// An empty has_apc column is resolved through `apc` by ISSN; journals absent
// from the APC source stay Unknown.
JournalTable parse_journals(LineSource& in, std::string_view source, const ApcList* apc,
                            const IssueSink& on_issue, ParseStats* stats = nullptr);

struct Registries {
  InstitutionTable institutions;
  JournalTable journals;
};

struct RegistryInputs {
  LineSource* institutions = nullptr;
  LineSource* journals = nullptr;
  LineSource* apc = nullptr;             // optional
  LineSource* country_regions = nullptr;  // optional
};

Registries parse_registries(const RegistryInputs& inputs, const IssueSink& on_issue);

}  // namespace oa::ingest
