#include "oa/ingest.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <json.hpp>
#include <set>
#include <unordered_set>

#include "oa/csv.hpp"
#include "oa/repo_analytics.hpp"
#include "oa/text.hpp"

namespace oa::ingest {

using nlohmann::json;

std::string_view issue_kind_name(IssueKind kind) noexcept {
  switch (kind) {
    case IssueKind::Malformed: return "malformed";
    case IssueKind::MissingRequiredField: return "missing_required_field";
    case IssueKind::DuplicateKey: return "duplicate_key";
    case IssueKind::OutOfScope: return "out_of_scope";
    case IssueKind::DanglingReference: return "dangling_reference";
  }
  return "?";
}

bool is_schema_violation(IssueKind kind) noexcept {
  return kind == IssueKind::Malformed || kind == IssueKind::MissingRequiredField;
}

namespace {

ParseIssue make_issue(std::string_view source, std::size_t line_no, IssueKind kind,
                      std::string detail) {
  return ParseIssue{std::string(source), line_no, kind, std::move(detail)};
}

// ---------------------------------------------------------------------------
// Evidence

std::optional<std::string> optional_string(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

std::variant<OALocation, std::string> parse_location(const json& loc) {
  if (!loc.is_object()) return std::string("location is not an object");
  OALocation out;
  const auto host = loc.find("host_type");
  if (host == loc.end() || !host->is_string()) return std::string("location without host_type");
  const auto& host_str = host->get_ref<const std::string&>();
  if (text::iequals(host_str, "publisher")) {
    out.host_type = HostType::Publisher;
  } else if (text::iequals(host_str, "repository")) {
    out.host_type = HostType::Repository;
  } else {
    return fmt::format("unknown host_type '{}'", host_str);
  }
  for (const char* key : {"url", "url_for_landing_page", "url_for_pdf"}) {
    if (auto url = optional_string(loc, key); url && !text::trim(*url).empty()) {
      out.url = std::string(text::trim(*url));
      break;
    }
  }
  if (out.url.empty()) return std::string("location without url");
  out.license = optional_string(loc, "license");
  if (out.license && text::trim(*out.license).empty()) out.license.reset();
  out.endpoint_hint = optional_string(loc, "endpoint_id");
  return out;
}

}  // namespace

EvidenceLineResult parse_evidence_line(std::string_view line, std::size_t line_no,
                                       std::string_view source) {
  json doc = json::parse(line.begin(), line.end(), nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) return make_issue(source, line_no, IssueKind::Malformed, "invalid JSON");
  if (!doc.is_object()) {
    return make_issue(source, line_no, IssueKind::Malformed, "line is not a JSON object");
  }

  OAEvidenceRecord record;
  const auto doi = doc.find("doi");
  if (doi == doc.end() || doi->is_null()) {
    return make_issue(source, line_no, IssueKind::MissingRequiredField, "missing doi");
  }
  if (!doi->is_string()) return make_issue(source, line_no, IssueKind::Malformed, "doi is not a string");
  auto normalized = normalize_doi(doi->get_ref<const std::string&>());
  if (!normalized) {
    return make_issue(source, line_no, IssueKind::Malformed,
                      fmt::format("invalid doi '{}'", doi->get_ref<const std::string&>()));
  }
  record.doi = std::move(*normalized);

  const auto is_oa = doc.find("journal_is_oa");
  if (is_oa == doc.end() || is_oa->is_null()) {
    return make_issue(source, line_no, IssueKind::MissingRequiredField, "missing journal_is_oa");
  }
  if (!is_oa->is_boolean()) {
    return make_issue(source, line_no, IssueKind::Malformed, "journal_is_oa is not a boolean");
  }
  record.journal_is_oa = is_oa->get<bool>();

  if (auto issn = optional_string(doc, "journal_issn_l")) {
    record.journal_issn = std::move(issn);
  } else if (auto issns = optional_string(doc, "journal_issns")) {
    auto parts = text::split_list(*issns, ',');
    if (!parts.empty()) record.journal_issn = parts.front();
  }

  auto locs = doc.find("oa_locations");
  if (locs == doc.end()) locs = doc.find("locations");
  if (locs == doc.end() || locs->is_null()) {
    return make_issue(source, line_no, IssueKind::MissingRequiredField, "missing oa_locations");
  }
  if (!locs->is_array()) {
    return make_issue(source, line_no, IssueKind::Malformed, "oa_locations is not an array");
  }
  record.locations.reserve(locs->size());
  for (const auto& loc : *locs) {
    auto parsed = parse_location(loc);
    if (auto* err = std::get_if<std::string>(&parsed)) {
      return make_issue(source, line_no, IssueKind::Malformed, std::move(*err));
    }
    record.locations.push_back(std::move(std::get<OALocation>(parsed)));
  }
  return record;
}

ParseStats parse_evidence_stream(LineSource& in, std::string_view source,
                                 const std::function<void(OAEvidenceRecord&&)>& on_record,
                                 const IssueSink& on_issue) {
  ParseStats stats;
  std::string line;
  while (in.next(line)) {
    if (text::trim(line).empty()) continue;
    ++stats.lines;
    auto result = parse_evidence_line(line, in.line_no(), source);
    if (auto* rec = std::get_if<OAEvidenceRecord>(&result)) {
      ++stats.records;
      on_record(std::move(*rec));
    } else {
      ++stats.rejected;
      on_issue(std::move(std::get<ParseIssue>(result)));
    }
  }
  return stats;
}

namespace {

// ---------------------------------------------------------------------------
// Tabular rows shared by the CSV and JSON-lines readers.

class Row {
 public:
  void clear() { values_.clear(); }
  void set(std::string key, std::string value) { values_[std::move(key)] = std::move(value); }
  // Trimmed value, empty when absent.
  [[nodiscard]] std::string_view get(std::string_view key) const {
    const auto it = values_.find(key);
    return it == values_.end() ? std::string_view() : text::trim(it->second);
  }

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

// Returns true when the row produced a record; a rejected row must have
// reported exactly one issue.
using RowHandler = std::function<bool(const Row&, std::size_t line_no)>;

std::string json_value_to_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return {};
  if (v.is_array()) {
    std::string out;
    for (const auto& item : v) {
      if (!out.empty()) out.push_back(';');
      out += json_value_to_string(item);
    }
    return out;
  }
  return v.dump();
}

// Drives `on_row` over a CSV (header + rows) or, when allowed and the first
// non-blank line is a JSON object, a JSON-lines table. Structural defects (bad
// quoting, wrong column count, bad JSON) are reported here.
ParseStats read_table(LineSource& in, std::string_view source, bool allow_json,
                      const RowHandler& on_row, const IssueSink& on_issue) {
  ParseStats stats;
  std::string first;
  while (in.next(first)) {
    if (!text::trim(first).empty()) break;
    first.clear();
  }
  if (text::trim(first).empty()) return stats;

  Row row;
  auto dispatch = [&](std::size_t line_no) {
    if (on_row(row, line_no)) {
      ++stats.records;
    } else {
      ++stats.rejected;
    }
  };

  if (allow_json && text::trim(first).starts_with("{")) {
    std::string line = std::move(first);
    do {
      if (text::trim(line).empty()) continue;
      ++stats.lines;
      const json doc = json::parse(line, nullptr, /*allow_exceptions=*/false);
      if (doc.is_discarded() || !doc.is_object()) {
        ++stats.rejected;
        on_issue(make_issue(source, in.line_no(), IssueKind::Malformed, "invalid JSON object"));
        continue;
      }
      row.clear();
      for (const auto& [key, value] : doc.items()) row.set(text::to_lower(key), json_value_to_string(value));
      dispatch(in.line_no());
    } while (in.next(line));
    return stats;
  }

  const auto header_fields = csv::split_record(first);
  if (!header_fields) throw IoError(fmt::format("{}: malformed CSV header", source));
  std::vector<std::string> header;
  for (const auto& h : *header_fields) header.push_back(text::to_lower(text::trim(h)));

  csv::Reader reader(in);
  csv::Reader::Record rec;
  while (reader.next(rec)) {
    if (rec.blank) continue;
    ++stats.lines;
    if (!rec.fields) {
      ++stats.rejected;
      on_issue(make_issue(source, rec.line_no, IssueKind::Malformed, "malformed CSV quoting"));
      continue;
    }
    if (rec.fields->size() != header.size()) {
      ++stats.rejected;
      on_issue(make_issue(source, rec.line_no, IssueKind::Malformed,
                          fmt::format("expected {} columns, found {}", header.size(),
                                      rec.fields->size())));
      continue;
    }
    row.clear();
    for (std::size_t i = 0; i < header.size(); ++i) row.set(header[i], (*rec.fields)[i]);
    dispatch(rec.line_no);
  }
  return stats;
}

std::optional<bool> parse_bool(std::string_view s) {
  s = text::trim(s);
  for (const auto t : {"true", "yes", "y", "1"}) {
    if (text::iequals(s, t)) return true;
  }
  for (const auto f : {"false", "no", "n", "0"}) {
    if (text::iequals(s, f)) return false;
  }
  return std::nullopt;
}

std::optional<ApcStatus> parse_apc(std::string_view s) {
  s = text::trim(s);
  if (s.empty() || text::iequals(s, "unknown")) return ApcStatus::Unknown;
  if (auto b = parse_bool(s)) return *b ? ApcStatus::Yes : ApcStatus::No;
  return std::nullopt;
}

template <typename T>
std::vector<T> sorted_unique(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Publications

ParseStats parse_publications(LineSource& in, std::string_view source,
                              const PublicationFilter& filter,
                              const std::function<void(PublicationRecord&&)>& on_record,
                              const IssueSink& on_issue) {
  std::unordered_set<std::string> seen;
  auto reject = [&](std::size_t line_no, IssueKind kind, std::string detail) {
    on_issue(make_issue(source, line_no, kind, std::move(detail)));
    return false;
  };

  auto handle = [&](const Row& row, std::size_t line_no) -> bool {
    PublicationRecord pub;
    pub.pub_id = std::string(row.get("pub_id"));
    if (pub.pub_id.empty()) return reject(line_no, IssueKind::MissingRequiredField, "missing pub_id");

    const auto year_text = row.get("year");
    if (year_text.empty()) return reject(line_no, IssueKind::MissingRequiredField, "missing year");
    const auto [ptr, ec] = std::from_chars(year_text.data(), year_text.data() + year_text.size(), pub.year);
    if (ec != std::errc() || ptr != year_text.data() + year_text.size()) {
      return reject(line_no, IssueKind::Malformed, fmt::format("invalid year '{}'", year_text));
    }

    const auto doc_type_text = row.get("doc_type");
    if (doc_type_text.empty()) return reject(line_no, IssueKind::MissingRequiredField, "missing doc_type");

    pub.journal_id = std::string(row.get("journal_id"));
    if (pub.journal_id.empty()) return reject(line_no, IssueKind::MissingRequiredField, "missing journal_id");

    const auto field_text = row.get("field_ids");
    const auto field_codes = text::split_list(field_text);
    if (field_codes.empty()) return reject(line_no, IssueKind::MissingRequiredField, "missing field_ids");
    for (const auto& code : field_codes) {
      const auto field = parse_field(code);
      if (!field) return reject(line_no, IssueKind::Malformed, fmt::format("unknown field '{}'", code));
      pub.field_ids.push_back(*field);
    }
    pub.field_ids = sorted_unique(std::move(pub.field_ids));

    if (const auto doi_text = row.get("doi"); !doi_text.empty()) {
      pub.doi = normalize_doi(doi_text);
      if (!pub.doi) return reject(line_no, IssueKind::Malformed, fmt::format("invalid doi '{}'", doi_text));
    }

    const auto doc_type = parse_doc_type(doc_type_text);
    if (!doc_type) {
      return reject(line_no, IssueKind::OutOfScope,
                    fmt::format("doc_type '{}' is not citable", doc_type_text));
    }
    pub.doc_type = *doc_type;
    if (!filter.period.contains(pub.year)) {
      return reject(line_no, IssueKind::OutOfScope,
                    fmt::format("year {} outside {}-{}", pub.year, filter.period.first, filter.period.last));
    }

    pub.language = text::to_lower(row.get("language"));
    if (pub.language == "unknown") pub.language.clear();

    for (auto& id : text::split_list(row.get("institution_ids"))) {
      if (filter.roster && !filter.roster->contains(id)) {
        on_issue(make_issue(source, line_no, IssueKind::DanglingReference,
                            fmt::format("publication {} references unknown institution '{}'", pub.pub_id, id)));
        continue;
      }
      pub.institution_ids.push_back(std::move(id));
    }
    pub.institution_ids = sorted_unique(std::move(pub.institution_ids));

    if (!seen.insert(pub.pub_id).second) {
      return reject(line_no, IssueKind::DuplicateKey, fmt::format("duplicate pub_id '{}'", pub.pub_id));
    }
    on_record(std::move(pub));
    return true;
  };
  return read_table(in, source, /*allow_json=*/true, handle, on_issue);
}

// ---------------------------------------------------------------------------
// Registries

CountryRegions parse_country_regions(LineSource& in, std::string_view source,
                                     const IssueSink& on_issue) {
  CountryRegions table;
  auto handle = [&](const Row& row, std::size_t line_no) -> bool {
    auto country = text::to_upper(row.get("country"));
    auto regions = text::split_list(row.get("regions"));
    if (country.empty() || regions.empty()) {
      on_issue(make_issue(source, line_no, IssueKind::MissingRequiredField, "missing country or regions"));
      return false;
    }
    if (table.contains(country)) {
      on_issue(make_issue(source, line_no, IssueKind::DuplicateKey, fmt::format("duplicate country '{}'", country)));
      return false;
    }
    table.emplace(std::move(country), sorted_unique(std::move(regions)));
    return true;
  };
  read_table(in, source, false, handle, on_issue);
  return table;
}

InstitutionTable parse_institutions(LineSource& in, std::string_view source,
                                    const CountryRegions* region_table,
                                    const IssueSink& on_issue, ParseStats* stats) {
  InstitutionTable table;
  auto reject = [&](std::size_t line_no, IssueKind kind, std::string detail) {
    on_issue(make_issue(source, line_no, kind, std::move(detail)));
    return false;
  };
  auto handle = [&](const Row& row, std::size_t line_no) -> bool {
    Institution inst;
    inst.inst_id = std::string(row.get("inst_id"));
    if (inst.inst_id.empty()) return reject(line_no, IssueKind::MissingRequiredField, "missing inst_id");
    inst.name = std::string(row.get("name"));
    if (inst.name.empty()) return reject(line_no, IssueKind::MissingRequiredField, "missing name");
    inst.country = text::to_upper(row.get("country"));
    if (inst.country.empty()) return reject(line_no, IssueKind::MissingRequiredField, "missing country");
    inst.regions = text::split_list(row.get("regions"));
    if (inst.regions.empty() && region_table) {
      if (const auto it = region_table->find(inst.country); it != region_table->end()) inst.regions = it->second;
    }
    if (inst.regions.empty()) return reject(line_no, IssueKind::MissingRequiredField, "missing regions");
    inst.regions = sorted_unique(std::move(inst.regions));
    for (const auto& pattern : text::split_list(row.get("repo_url_patterns"))) {
      auto normalized = repo::normalize_url(pattern);
      if (!normalized.empty()) inst.repo_url_patterns.push_back(std::move(normalized));
    }
    inst.repo_url_patterns = sorted_unique(std::move(inst.repo_url_patterns));
    if (table.contains(inst.inst_id)) {
      return reject(line_no, IssueKind::DuplicateKey, fmt::format("duplicate inst_id '{}'", inst.inst_id));
    }
    auto id = inst.inst_id;
    table.emplace(std::move(id), std::move(inst));
    return true;
  };
  const auto s = read_table(in, source, false, handle, on_issue);
  if (stats) *stats = s;
  return table;
}

ApcList parse_apc_list(LineSource& in, std::string_view source, const IssueSink& on_issue) {
  ApcList list;
  auto handle = [&](const Row& row, std::size_t line_no) -> bool {
    const auto issn = std::string(row.get("issn"));
    if (issn.empty()) {
      on_issue(make_issue(source, line_no, IssueKind::MissingRequiredField, "missing issn"));
      return false;
    }
    const auto status = parse_apc(row.get("has_apc"));
    if (!status) {
      on_issue(make_issue(source, line_no, IssueKind::Malformed,
                          fmt::format("invalid has_apc '{}'", row.get("has_apc"))));
      return false;
    }
    if (!list.emplace(issn, *status).second) {
      on_issue(make_issue(source, line_no, IssueKind::DuplicateKey, fmt::format("duplicate issn '{}'", issn)));
      return false;
    }
    return true;
  };
  read_table(in, source, false, handle, on_issue);
  return list;
}

JournalTable parse_journals(LineSource& in, std::string_view source, const ApcList* apc,
                            const IssueSink& on_issue, ParseStats* stats) {
  JournalTable table;
  auto reject = [&](std::size_t line_no, IssueKind kind, std::string detail) {
    on_issue(make_issue(source, line_no, kind, std::move(detail)));
    return false;
  };
  auto handle = [&](const Row& row, std::size_t line_no) -> bool {
    JournalRecord journal;
    journal.journal_id = std::string(row.get("journal_id"));
    if (journal.journal_id.empty()) return reject(line_no, IssueKind::MissingRequiredField, "missing journal_id");
    journal.issns = text::split_list(row.get("issns"));
    if (const auto country = row.get("country"); !country.empty()) journal.country = text::to_upper(country);

    const auto fully_oa_text = row.get("is_fully_oa");
    if (fully_oa_text.empty()) return reject(line_no, IssueKind::MissingRequiredField, "missing is_fully_oa");
    const auto fully_oa = parse_bool(fully_oa_text);
    if (!fully_oa) return reject(line_no, IssueKind::Malformed, fmt::format("invalid is_fully_oa '{}'", fully_oa_text));
    journal.is_fully_oa = *fully_oa;

    const auto apc_text = row.get("has_apc");
    const auto status = parse_apc(apc_text);
    if (!status) return reject(line_no, IssueKind::Malformed, fmt::format("invalid has_apc '{}'", apc_text));
    journal.has_apc = *status;
    if (apc_text.empty() && apc) {
      for (const auto& issn : journal.issns) {
        if (const auto it = apc->find(issn); it != apc->end()) {
          journal.has_apc = it->second;
          break;
        }
      }
    }
    if (const auto address = row.get("publisher_address"); !address.empty()) {
      journal.publisher_address = std::string(address);
    }
    if (table.find(journal.journal_id)) {
      return reject(line_no, IssueKind::DuplicateKey, fmt::format("duplicate journal_id '{}'", journal.journal_id));
    }
    table.insert(std::move(journal));
    return true;
  };
  const auto s = read_table(in, source, false, handle, on_issue);
  if (stats) *stats = s;
  return table;
}

Registries parse_registries(const RegistryInputs& inputs, const IssueSink& on_issue) {
  Registries out;
  CountryRegions regions;
  if (inputs.country_regions) regions = parse_country_regions(*inputs.country_regions, "country_regions", on_issue);
  ApcList apc;
  if (inputs.apc) apc = parse_apc_list(*inputs.apc, "apc", on_issue);
  if (inputs.institutions) {
    out.institutions = parse_institutions(*inputs.institutions, "institutions",
                                          inputs.country_regions ? &regions : nullptr, on_issue);
  }
  if (inputs.journals) {
    out.journals = parse_journals(*inputs.journals, "journals", inputs.apc ? &apc : nullptr, on_issue);
  }
  return out;
}

}  // namespace oa::ingest
