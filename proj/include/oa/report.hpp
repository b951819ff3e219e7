// Report tables and their CSV / JSON-lines serialization.
//
// Every value is pre-formatted text; shares are rendered once, here, as
// percentages with one decimal. A null cell is an empty CSV field or a JSON
// null.
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oa/classifier.hpp"
#include "oa/gold_models.hpp"
#include "oa/indicators.hpp"
#include "oa/ingest.hpp"
#include "oa/repo_analytics.hpp"

namespace oa::report {

using Cell = std::optional<std::string>;
using Row = std::vector<Cell>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<Row> rows;

  friend bool operator==(const Table&, const Table&) = default;
};

enum class Format : std::uint8_t { Csv, JsonLines };

std::string_view format_extension(Format format) noexcept;
std::optional<Format> parse_format(std::string_view text);

// CSV: header row plus one RFC-4180 record per row, "\n" terminated.
// JSON lines: one object per row with keys in column order.
std::string emit_report(const Table& table, Format format);

// Inverse of emit_report for tables with the given columns.
Table parse_report(std::string_view bytes, Format format, std::string name = {},
                   std::vector<std::string> columns = {});

// ---------------------------------------------------------------------------
// Table builders. Each returns rows in the table's canonical order.

Table classification_table(std::span<const ClassifiedPublication> pubs);
Table overlap_table(const indicators::OverlapMatrix& matrix);
Table university_indicator_table(std::span<const IndicatorCell> cells);
// `full` adds roster size and the display flag and keeps hidden groups.
Table country_median_table(std::span<const indicators::GroupSummary> rows, bool full);
Table region_median_table(std::span<const indicators::GroupSummary> rows);
Table field_summary_table(std::span<const indicators::GroupSummary> rows);
Table university_profile_table(std::span<const IndicatorCell> cells);
Table repo_bounds_table(std::span<const repo::RepoBounds> rows, const InstitutionTable& institutions);
Table pmc_table(std::span<const repo::PMCRow> rows);
Table gold_model_table(std::span<const gold::GoldModelRow> rows, bool full);

// Issue counts per (source, kind).
using IssueSummary = std::map<std::pair<std::string, ingest::IssueKind>, std::size_t>;
Table issues_table(const IssueSummary& summary);

struct ReportBundle {
  std::vector<Table> tables;

  [[nodiscard]] const Table* find(std::string_view name) const;
};

// Writes one file per table (<name>.csv or <name>.jsonl) into `dir`,
// creating it if needed.
void write_bundle(const ReportBundle& bundle, const std::filesystem::path& dir, Format format);

}  // namespace oa::report
