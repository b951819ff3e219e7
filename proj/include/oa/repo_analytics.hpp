// Institutional-repository matching and PubMed Central (PMC) accounting.
//
// All matching is substring containment on normalized URLs.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oa/classifier.hpp"
#include "oa/model.hpp"

namespace oa::repo {

// Lowercases and strips the scheme, a leading "www." and trailing slashes.
std::string normalize_url(std::string_view url);

// lower: a repository copy under one of the institution's own URL patterns.
// upper: lower, or a repository copy under the handle resolver.
struct RepoMatch {
  bool lower = false;
  bool upper = false;

  friend bool operator==(const RepoMatch&, const RepoMatch&) = default;
};

RepoMatch match_repository(std::span<const OALocation> locations, const Institution& inst,
                           std::string_view handle_pattern);

struct RepoBounds {
  std::string inst_id;
  Count pubs = 0;
  Count green_count = 0;
  Count matched_lower = 0;
  Count matched_upper = 0;

  [[nodiscard]] std::optional<Ratio> lower_share() const { return make_share(matched_lower, green_count); }
  [[nodiscard]] std::optional<Ratio> upper_share() const { return make_share(matched_upper, green_count); }
};

// `pubs` must all be affiliated with `inst`.
RepoBounds repo_share_bounds(std::span<const ClassifiedPublication> pubs, const Institution& inst,
                             std::string_view handle_pattern);

// Bounds for every roster institution, ordered by inst_id.
std::vector<RepoBounds> repo_bounds_table(std::span<const ClassifiedPublication> pubs,
                                          const InstitutionTable& institutions,
                                          std::string_view handle_pattern);

// True iff some repository location's normalized URL contains a PMC pattern.
bool detect_pmc(std::span<const OALocation> locations, std::span<const std::string> pmc_patterns);

struct PMCRow {
  std::string country;
  Count green_count = 0;
  Count pmc_count = 0;
  Count pmc_only_count = 0;
  Count pmc_gold = 0;
  Count pmc_bronze = 0;
  Count pmc_hybrid = 0;

  // Shares of PMC publications also flagged gold / bronze / hybrid.
  [[nodiscard]] std::optional<Ratio> pct_gold() const { return make_share(pmc_gold, pmc_count); }
  [[nodiscard]] std::optional<Ratio> pct_bronze() const { return make_share(pmc_bronze, pmc_count); }
  [[nodiscard]] std::optional<Ratio> pct_hybrid() const { return make_share(pmc_hybrid, pmc_count); }
  [[nodiscard]] std::optional<Ratio> pmc_share() const { return make_share(pmc_count, green_count); }
};

// One row per roster country; publications count once per country (distinct
// across that country's institutions). Rows are sorted by pmc/green
// descending (countries without green last), then country code.
std::vector<PMCRow> pmc_overlap_table(std::span<const ClassifiedPublication> pubs,
                                      const InstitutionTable& institutions,
                                      std::span<const std::string> pmc_patterns);

}  // namespace oa::repo
