#include "oa/indicators.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <set>

namespace oa::indicators {

namespace mp = boost::multiprecision;

SlotCounts& SlotCounts::operator+=(const SlotCounts& other) {
  pubs += other.pubs;
  doi_pubs += other.doi_pubs;
  for (std::size_t i = 0; i < oa.size(); ++i) oa[i] += other.oa[i];
  return *this;
}

namespace {
void add_publication(SlotCounts& slot, const ClassifiedPublication& pub) {
  ++slot.pubs;
  if (pub.publication.doi) ++slot.doi_pubs;
  for (const auto type : kReportTypes) {
    if (pub.types.has(type)) ++slot.oa[static_cast<std::size_t>(type)];
  }
}
}  // namespace

CountTable count_full(std::span<const ClassifiedPublication> pubs) {
  CountTable table;
  for (const auto& pub : pubs) {
    // institution_ids and field_ids are distinct by construction; dedupe
    // anyway for hand-built records.
    std::set<std::string_view> insts(pub.publication.institution_ids.begin(),
                                     pub.publication.institution_ids.end());
    std::set<Field> fields(pub.publication.field_ids.begin(), pub.publication.field_ids.end());
    for (const auto inst : insts) {
      auto& counts = table[std::string(inst)];
      for (const auto field : fields) add_publication(counts[static_cast<std::size_t>(field)], pub);
      add_publication(counts[static_cast<std::size_t>(Field::AllSciences)], pub);
    }
  }
  return table;
}

void merge_counts(CountTable& into, const CountTable& from) {
  for (const auto& [inst, counts] : from) {
    auto& target = into[inst];
    for (std::size_t f = 0; f < counts.size(); ++f) target[f] += counts[f];
  }
}

std::vector<IndicatorCell> university_indicators(const CountTable& counts, const PipelineConfig& config) {
  std::vector<IndicatorCell> cells;
  cells.reserve(counts.size() * kReportFields.size() * kReportTypes.size());
  for (const auto& [inst, by_field] : counts) {
    for (const auto field : kReportFields) {
      const auto& slot = by_field[static_cast<std::size_t>(field)];
      const Count denominator = config.denominator_mode == DenominatorMode::AllPubs ? slot.pubs : slot.doi_pubs;
      for (const auto type : kReportTypes) {
        cells.push_back(IndicatorCell{Scope::University, inst, field, type,
                                      slot.oa[static_cast<std::size_t>(type)], denominator});
      }
    }
  }
  return cells;
}

std::optional<Ratio> median(std::vector<Ratio> shares) {
  if (shares.empty()) return std::nullopt;
  const std::size_t mid = shares.size() / 2;
  std::nth_element(shares.begin(), shares.begin() + static_cast<std::ptrdiff_t>(mid), shares.end());
  const Ratio upper = shares[mid];
  if (shares.size() % 2 == 1) return upper;
  const Ratio lower = *std::max_element(shares.begin(), shares.begin() + static_cast<std::ptrdiff_t>(mid));
  return Ratio::midpoint(lower, upper);
}

std::optional<BigRatio> mean(std::span<const Ratio> shares) {
  if (shares.empty()) return std::nullopt;
  BigRatio sum = 0;
  for (const auto& s : shares) sum += BigRatio(s.numerator(), s.denominator());
  return sum / static_cast<long long>(shares.size());
}

std::string format_percent(const BigRatio& share) {
  const mp::cpp_int n = mp::numerator(share);
  const mp::cpp_int d = mp::denominator(share);
  const mp::cpp_int tenths = (n * 2000 + d) / (2 * d);
  const auto t = tenths.convert_to<long long>();
  return fmt::format("{}.{}", t / 10, t % 10);
}

namespace {

using GroupKey = std::tuple<std::string, Field, OaType>;

std::vector<GroupSummary> summarize(const std::map<GroupKey, std::vector<Ratio>>& groups,
                                    const std::set<std::string>& group_names) {
  std::vector<GroupSummary> out;
  for (const auto& name : group_names) {
    for (const auto field : kReportFields) {
      for (const auto type : kReportTypes) {
        GroupSummary summary;
        summary.group = name;
        summary.field = field;
        summary.oa_type = type;
        if (const auto it = groups.find({name, field, type}); it != groups.end()) {
          summary.n_universities = it->second.size();
          summary.median = median(it->second);
          summary.mean = mean(it->second);
        }
        out.push_back(std::move(summary));
      }
    }
  }
  return out;
}

}  // namespace

std::vector<GroupSummary> median_share_by_country(std::span<const IndicatorCell> cells,
                                                  const InstitutionTable& institutions,
                                                  int min_universities) {
  std::map<std::string, std::size_t> roster;
  std::set<std::string> countries;
  for (const auto& [id, inst] : institutions) {
    ++roster[inst.country];
    countries.insert(inst.country);
  }
  std::map<GroupKey, std::vector<Ratio>> groups;
  for (const auto& cell : cells) {
    if (cell.scope != Scope::University) continue;
    const auto share = cell.share();
    if (!share) continue;
    const auto inst = institutions.find(cell.scope_id);
    if (inst == institutions.end()) continue;
    groups[{inst->second.country, cell.field, cell.oa_type}].push_back(*share);
  }
  auto out = summarize(groups, countries);
  for (auto& row : out) {
    row.roster_universities = roster[row.group];
    row.displayed = row.roster_universities >= static_cast<std::size_t>(min_universities);
  }
  return out;
}

std::vector<GroupSummary> region_rollup(std::span<const IndicatorCell> cells,
                                        const InstitutionTable& institutions) {
  std::map<std::string, std::size_t> roster;
  std::set<std::string> regions;
  for (const auto& [id, inst] : institutions) {
    for (const auto& region : inst.regions) {
      ++roster[region];
      regions.insert(region);
    }
  }
  std::map<GroupKey, std::vector<Ratio>> groups;
  for (const auto& cell : cells) {
    if (cell.scope != Scope::University) continue;
    const auto share = cell.share();
    if (!share) continue;
    const auto inst = institutions.find(cell.scope_id);
    if (inst == institutions.end()) continue;
    for (const auto& region : inst->second.regions) groups[{region, cell.field, cell.oa_type}].push_back(*share);
  }
  auto out = summarize(groups, regions);
  for (auto& row : out) row.roster_universities = roster[row.group];
  return out;
}

std::vector<GroupSummary> world_summary(std::span<const IndicatorCell> cells) {
  static const std::string kWorld = "World";
  std::map<GroupKey, std::vector<Ratio>> groups;
  std::set<std::string> universities;
  for (const auto& cell : cells) {
    if (cell.scope != Scope::University) continue;
    universities.insert(cell.scope_id);
    if (const auto share = cell.share()) groups[{kWorld, cell.field, cell.oa_type}].push_back(*share);
  }
  auto out = summarize(groups, {kWorld});
  for (auto& row : out) row.roster_universities = universities.size();
  return out;
}

Count OverlapMatrix::partition(OaType type) const {
  if (type == OaType::Green) return green_only;
  if (type == OaType::Any) return total_oa;
  return per_type[static_cast<std::size_t>(type)];
}

OverlapMatrix& OverlapMatrix::operator+=(const OverlapMatrix& other) {
  total_oa += other.total_oa;
  green_only += other.green_only;
  for (std::size_t i = 0; i < per_type.size(); ++i) {
    per_type[i] += other.per_type[i];
    with_green[i] += other.with_green[i];
  }
  return *this;
}

OverlapMatrix overlap_matrix(std::span<const ClassifiedPublication> pubs) {
  OverlapMatrix m;
  for (const auto& pub : pubs) {
    const auto& t = pub.types;
    if (!t.any_oa()) continue;
    ++m.total_oa;
    for (const auto type : kOaTypes) {
      if (!t.has(type)) continue;
      const auto i = static_cast<std::size_t>(type);
      ++m.per_type[i];
      if (t.green()) ++m.with_green[i];
    }
    if (t.green() && !t.gold() && !t.hybrid() && !t.bronze()) ++m.green_only;
  }
  return m;
}

std::vector<ProfileRow> field_profile(std::span<const IndicatorCell> cells, std::string_view inst_id) {
  std::vector<ProfileRow> rows;
  for (const auto field : kMainFields) rows.push_back(ProfileRow{field, {}});
  for (const auto& cell : cells) {
    if (cell.scope != Scope::University || cell.scope_id != inst_id || cell.field == Field::AllSciences) continue;
    rows[static_cast<std::size_t>(cell.field)].shares[static_cast<std::size_t>(cell.oa_type)] = cell.share();
  }
  return rows;
}

}  // namespace oa::indicators
