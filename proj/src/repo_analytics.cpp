#include "oa/repo_analytics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "oa/text.hpp"

namespace oa::repo {

std::string normalize_url(std::string_view url) {
  std::string out = text::to_lower(text::trim(url));
  std::string_view view = out;
  if (const auto scheme = view.find("://"); scheme != std::string_view::npos) {
    view.remove_prefix(scheme + 3);
  }
  if (view.starts_with("www.")) view.remove_prefix(4);
  while (!view.empty() && view.back() == '/') view.remove_suffix(1);
  return std::string(view);
}

namespace {

bool contains_any(std::string_view url, std::span<const std::string> patterns) {
  return std::any_of(patterns.begin(), patterns.end(), [&](const std::string& p) {
    return !p.empty() && url.find(p) != std::string_view::npos;
  });
}

}  // namespace

RepoMatch match_repository(std::span<const OALocation> locations, const Institution& inst,
                           std::string_view handle_pattern) {
  const std::string handle = normalize_url(handle_pattern);
  RepoMatch match;
  bool handle_hit = false;
  for (const auto& loc : locations) {
    if (loc.host_type != HostType::Repository) continue;
    const auto url = normalize_url(loc.url);
    if (contains_any(url, inst.repo_url_patterns)) match.lower = true;
    if (!handle.empty() && url.find(handle) != std::string::npos) handle_hit = true;
  }
  match.upper = match.lower || handle_hit;
  return match;
}

namespace {
void accumulate_bounds(RepoBounds& bounds, const ClassifiedPublication& pub, const Institution& inst,
                       std::string_view handle_pattern) {
  ++bounds.pubs;
  if (!pub.types.green()) return;
  ++bounds.green_count;
  const auto match = match_repository(pub.locations_used, inst, handle_pattern);
  if (match.lower) ++bounds.matched_lower;
  if (match.upper) ++bounds.matched_upper;
}
}  // namespace

RepoBounds repo_share_bounds(std::span<const ClassifiedPublication> pubs, const Institution& inst,
                             std::string_view handle_pattern) {
  RepoBounds bounds;
  bounds.inst_id = inst.inst_id;
  for (const auto& pub : pubs) accumulate_bounds(bounds, pub, inst, handle_pattern);
  return bounds;
}

std::vector<RepoBounds> repo_bounds_table(std::span<const ClassifiedPublication> pubs,
                                          const InstitutionTable& institutions,
                                          std::string_view handle_pattern) {
  std::map<std::string, RepoBounds, std::less<>> table;
  for (const auto& [id, inst] : institutions) table[id].inst_id = id;
  for (const auto& pub : pubs) {
    for (const auto& id : pub.publication.institution_ids) {
      const auto inst = institutions.find(id);
      if (inst == institutions.end()) continue;
      accumulate_bounds(table[id], pub, inst->second, handle_pattern);
    }
  }
  std::vector<RepoBounds> out;
  out.reserve(table.size());
  for (auto& [id, bounds] : table) out.push_back(std::move(bounds));
  return out;
}

bool detect_pmc(std::span<const OALocation> locations, std::span<const std::string> pmc_patterns) {
  std::vector<std::string> patterns;
  patterns.reserve(pmc_patterns.size());
  for (const auto& p : pmc_patterns) patterns.push_back(normalize_url(p));
  return std::any_of(locations.begin(), locations.end(), [&](const OALocation& loc) {
    return loc.host_type == HostType::Repository && contains_any(normalize_url(loc.url), patterns);
  });
}

std::vector<PMCRow> pmc_overlap_table(std::span<const ClassifiedPublication> pubs,
                                      const InstitutionTable& institutions,
                                      std::span<const std::string> pmc_patterns) {
  std::vector<std::string> patterns;
  for (const auto& p : pmc_patterns) patterns.push_back(normalize_url(p));

  std::map<std::string, PMCRow> rows;
  for (const auto& [id, inst] : institutions) rows[inst.country].country = inst.country;

  std::set<std::string> countries;
  for (const auto& pub : pubs) {
    if (!pub.types.green()) continue;
    countries.clear();
    for (const auto& id : pub.publication.institution_ids) {
      if (const auto it = institutions.find(id); it != institutions.end()) countries.insert(it->second.country);
    }
    if (countries.empty()) continue;

    bool pmc = false;
    bool other_repository = false;
    for (const auto& loc : pub.locations_used) {
      if (loc.host_type != HostType::Repository) continue;
      if (contains_any(normalize_url(loc.url), patterns)) {
        pmc = true;
      } else {
        other_repository = true;
      }
    }
    for (const auto& country : countries) {
      auto& row = rows[country];
      ++row.green_count;
      if (!pmc) continue;
      ++row.pmc_count;
      if (!other_repository) ++row.pmc_only_count;
      if (pub.types.gold()) ++row.pmc_gold;
      if (pub.types.bronze()) ++row.pmc_bronze;
      if (pub.types.hybrid()) ++row.pmc_hybrid;
    }
  }

  std::vector<PMCRow> out;
  out.reserve(rows.size());
  for (auto& [country, row] : rows) out.push_back(std::move(row));
  std::stable_sort(out.begin(), out.end(), [](const PMCRow& a, const PMCRow& b) {
    const auto sa = a.pmc_share();
    const auto sb = b.pmc_share();
    if (sa.has_value() != sb.has_value()) return sa.has_value();
    if (sa && *sa != *sb) return *sa > *sb;
    return a.country < b.country;
  });
  return out;
}

}  // namespace oa::repo
