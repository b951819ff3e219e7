#include "oa/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "oa/csv.hpp"
#include "oa/text.hpp"

namespace oa::report {

using ordered_json = nlohmann::ordered_json;

std::string_view format_extension(Format format) noexcept {
  return format == Format::Csv ? ".csv" : ".jsonl";
}

std::optional<Format> parse_format(std::string_view text) {
  if (text::iequals(text, "csv")) return Format::Csv;
  if (text::iequals(text, "json-lines") || text::iequals(text, "jsonl")) return Format::JsonLines;
  return std::nullopt;
}

std::string emit_report(const Table& table, Format format) {
  std::string out;
  if (format == Format::Csv) {
    out += csv::join_record(table.columns);
    out.push_back('\n');
    std::vector<std::string> fields;
    for (const auto& row : table.rows) {
      fields.clear();
      for (const auto& cell : row) fields.push_back(cell.value_or(""));
      out += csv::join_record(fields);
      out.push_back('\n');
    }
    return out;
  }
  for (const auto& row : table.rows) {
    ordered_json obj = ordered_json::object();
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      const auto& cell = i < row.size() ? row[i] : Cell();
      obj[table.columns[i]] = cell ? ordered_json(*cell) : ordered_json(nullptr);
    }
    out += obj.dump();
    out.push_back('\n');
  }
  return out;
}

Table parse_report(std::string_view bytes, Format format, std::string name, std::vector<std::string> columns) {
  Table table{std::move(name), std::move(columns), {}};
  std::istringstream in{std::string(bytes)};
  StreamLineSource source(in);
  if (format == Format::Csv) {
    csv::Reader reader(source);
    csv::Reader::Record rec;
    bool header = true;
    while (reader.next(rec)) {
      if (rec.blank && !header) {
        // A blank line is a single empty field only for one-column tables.
        if (table.columns.size() == 1) table.rows.push_back(Row{Cell()});
        continue;
      }
      if (!rec.fields) throw std::runtime_error(fmt::format("malformed CSV at line {}", rec.line_no));
      if (header) {
        header = false;
        table.columns = *rec.fields;
        continue;
      }
      Row row;
      for (auto& f : *rec.fields) row.push_back(f.empty() ? Cell() : Cell(std::move(f)));
      table.rows.push_back(std::move(row));
    }
    return table;
  }
  std::string line;
  while (source.next(line)) {
    if (text::trim(line).empty()) continue;
    const auto obj = ordered_json::parse(line);
    if (table.columns.empty()) {
      for (const auto& [key, value] : obj.items()) table.columns.push_back(key);
    }
    Row row;
    for (const auto& column : table.columns) {
      const auto it = obj.find(column);
      row.push_back(it == obj.end() || it->is_null() ? Cell() : Cell(it->get<std::string>()));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

namespace {

Cell count_cell(Count value) { return std::to_string(value); }
Cell size_cell(std::size_t value) { return std::to_string(value); }
Cell pct_cell(const std::optional<Ratio>& share) {
  return share ? Cell(format_percent(*share)) : Cell();
}
Cell mean_cell(const std::optional<indicators::BigRatio>& share) {
  return share ? Cell(indicators::format_percent(*share)) : Cell();
}
Cell text_cell(std::string_view s) { return Cell(std::string(s)); }
Cell flag_cell(bool b) { return Cell(b ? "1" : "0"); }

}  // namespace

Table classification_table(std::span<const ClassifiedPublication> pubs) {
  Table table{"classification", {"pub_id", "doi", "gold", "green", "hybrid", "bronze", "any_oa"}, {}};
  std::vector<const ClassifiedPublication*> sorted;
  sorted.reserve(pubs.size());
  for (const auto& p : pubs) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    return a->publication.pub_id < b->publication.pub_id;
  });
  for (const auto* p : sorted) {
    const auto& t = p->types;
    table.rows.push_back({text_cell(p->publication.pub_id),
                          p->publication.doi ? Cell(*p->publication.doi) : Cell(), flag_cell(t.gold()),
                          flag_cell(t.green()), flag_cell(t.hybrid()), flag_cell(t.bronze()),
                          flag_cell(t.any_oa())});
  }
  return table;
}

Table overlap_table(const indicators::OverlapMatrix& m) {
  Table table{"overlap",
              {"oa_type", "count", "pct_of_oa", "also_green", "pct_also_green", "partition_count"},
              {}};
  for (const auto type : kOaTypes) {
    const auto i = static_cast<std::size_t>(type);
    table.rows.push_back({text_cell(oa_type_name(type)), count_cell(m.per_type[i]), pct_cell(m.share_of_oa(type)),
                          count_cell(m.with_green[i]), pct_cell(m.share_also_green(type)),
                          count_cell(m.partition(type))});
  }
  table.rows.push_back({text_cell(oa_type_name(OaType::Any)), count_cell(m.total_oa),
                        pct_cell(make_share(m.total_oa, m.total_oa)), Cell(), Cell(), count_cell(m.total_oa)});
  return table;
}

Table university_indicator_table(std::span<const IndicatorCell> cells) {
  Table table{"university_indicators",
              {"scope", "scope_id", "field", "oa_type", "numerator", "denominator", "share_pct"},
              {}};
  std::vector<const IndicatorCell*> sorted;
  for (const auto& c : cells) sorted.push_back(&c);
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    return std::tie(a->scope, a->scope_id, a->field, a->oa_type) <
           std::tie(b->scope, b->scope_id, b->field, b->oa_type);
  });
  for (const auto* c : sorted) {
    table.rows.push_back({text_cell(scope_name(c->scope)), text_cell(c->scope_id), text_cell(field_name(c->field)),
                          text_cell(oa_type_name(c->oa_type)), count_cell(c->numerator),
                          count_cell(c->denominator), pct_cell(c->share())});
  }
  return table;
}

namespace {
Table group_table(std::string name, std::string group_column, std::span<const indicators::GroupSummary> rows,
                  bool with_group, bool full) {
  Table table{std::move(name), {}, {}};
  if (with_group) table.columns.push_back(std::move(group_column));
  for (const char* c : {"field", "oa_type", "n_universities", "median_pct", "mean_pct"}) table.columns.emplace_back(c);
  if (full) {
    table.columns.emplace_back("roster_universities");
    table.columns.emplace_back("displayed");
  }
  std::vector<const indicators::GroupSummary*> sorted;
  for (const auto& r : rows) {
    if (full || r.displayed) sorted.push_back(&r);
  }
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    return std::tie(a->group, a->field, a->oa_type) < std::tie(b->group, b->field, b->oa_type);
  });
  for (const auto* r : sorted) {
    Row row;
    if (with_group) row.push_back(text_cell(r->group));
    row.push_back(text_cell(field_name(r->field)));
    row.push_back(text_cell(oa_type_name(r->oa_type)));
    row.push_back(size_cell(r->n_universities));
    row.push_back(pct_cell(r->median));
    row.push_back(mean_cell(r->mean));
    if (full) {
      row.push_back(size_cell(r->roster_universities));
      row.push_back(text_cell(r->displayed ? "yes" : "no"));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}
}  // namespace

Table country_median_table(std::span<const indicators::GroupSummary> rows, bool full) {
  return group_table(full ? "country_medians_full" : "country_medians", "country", rows, true, full);
}

Table region_median_table(std::span<const indicators::GroupSummary> rows) {
  return group_table("region_medians", "region", rows, true, false);
}

Table field_summary_table(std::span<const indicators::GroupSummary> rows) {
  return group_table("field_summary", "", rows, false, false);
}

Table university_profile_table(std::span<const IndicatorCell> cells) {
  Table table{"university_profiles",
              {"university", "field", "gold_pct", "green_pct", "hybrid_pct", "bronze_pct", "any_pct"},
              {}};
  std::vector<std::string> universities;
  for (const auto& c : cells) {
    if (c.scope == Scope::University) universities.push_back(c.scope_id);
  }
  std::sort(universities.begin(), universities.end());
  universities.erase(std::unique(universities.begin(), universities.end()), universities.end());
  for (const auto& u : universities) {
    for (const auto& profile : indicators::field_profile(cells, u)) {
      Row row{text_cell(u), text_cell(field_name(profile.field))};
      for (const auto& share : profile.shares) row.push_back(pct_cell(share));
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

Table repo_bounds_table(std::span<const repo::RepoBounds> rows, const InstitutionTable& institutions) {
  Table table{"repo_bounds",
              {"university", "name", "country", "pubs", "green_pubs", "matched_lower", "matched_upper",
               "repo_lower_pct", "repo_upper_pct"},
              {}};
  std::vector<const repo::RepoBounds*> sorted;
  for (const auto& r : rows) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) { return a->inst_id < b->inst_id; });
  for (const auto* r : sorted) {
    const auto inst = institutions.find(r->inst_id);
    table.rows.push_back({text_cell(r->inst_id), inst != institutions.end() ? text_cell(inst->second.name) : Cell(),
                          inst != institutions.end() ? text_cell(inst->second.country) : Cell(),
                          count_cell(r->pubs), count_cell(r->green_count), count_cell(r->matched_lower),
                          count_cell(r->matched_upper), pct_cell(r->lower_share()), pct_cell(r->upper_share())});
  }
  return table;
}

Table pmc_table(std::span<const repo::PMCRow> rows) {
  Table table{"pmc_overlap",
              {"country", "green_oa", "pmc", "pmc_only", "pct_gold", "pct_bronze", "pct_hybrid"},
              {}};
  // Rows arrive in canonical order from pmc_overlap_table.
  for (const auto& r : rows) {
    table.rows.push_back({text_cell(r.country), count_cell(r.green_count), count_cell(r.pmc_count),
                          count_cell(r.pmc_only_count), pct_cell(r.pct_gold()), pct_cell(r.pct_bronze()),
                          pct_cell(r.pct_hybrid())});
  }
  return table;
}

Table gold_model_table(std::span<const gold::GoldModelRow> rows, bool full) {
  Table table{full ? "gold_model_full" : "gold_model",
              {"country", "gold_total", "national_share", "apc_share", "english_share", "apc_known"},
              {}};
  if (full) {
    table.columns.emplace_back("roster_universities");
    table.columns.emplace_back("displayed");
  }
  std::vector<const gold::GoldModelRow*> sorted;
  for (const auto& r : rows) {
    if (full || r.displayed) sorted.push_back(&r);
  }
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) { return a->country < b->country; });
  for (const auto* r : sorted) {
    Row row{text_cell(r->country), count_cell(r->gold_total), pct_cell(r->national_share()),
            pct_cell(r->apc_share()), pct_cell(r->english_share()), count_cell(r->apc_known)};
    if (full) {
      row.push_back(size_cell(r->roster_universities));
      row.push_back(text_cell(r->displayed ? "yes" : "no"));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table issues_table(const IssueSummary& summary) {
  Table table{"issues_summary", {"source", "kind", "count"}, {}};
  for (const auto& [key, count] : summary) {
    table.rows.push_back({text_cell(key.first), text_cell(ingest::issue_kind_name(key.second)), size_cell(count)});
  }
  return table;
}

const Table* ReportBundle::find(std::string_view name) const {
  const auto it = std::find_if(tables.begin(), tables.end(), [&](const Table& t) { return t.name == name; });
  return it == tables.end() ? nullptr : &*it;
}

void write_bundle(const ReportBundle& bundle, const std::filesystem::path& dir, Format format) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create output directory '{}': {}", dir.string(), ec.message()));
  for (const auto& table : bundle.tables) {
    const auto path = dir / (table.name + std::string(format_extension(format)));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
    out << emit_report(table, format);
    if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
  }
}

}  // namespace oa::report
