// Full-counting aggregation of classified publications into university,
// country, region and world OA indicators.
#pragma once

#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oa/classifier.hpp"
#include "oa/model.hpp"

namespace oa::indicators {

using BigRatio = boost::multiprecision::cpp_rational;

// Counts for one (institution, field) slot. `oa` is indexed by OaType.
struct SlotCounts {
  Count pubs = 0;
  Count doi_pubs = 0;
  std::array<Count, 5> oa{};

  SlotCounts& operator+=(const SlotCounts& other);
  friend bool operator==(const SlotCounts&, const SlotCounts&) = default;
};

// Indexed by Field (five main fields, then AllSciences).
using InstitutionCounts = std::array<SlotCounts, 6>;

// Mergeable partial aggregate keyed by institution id.
using CountTable = std::map<std::string, InstitutionCounts>;

// Each publication adds 1 to every distinct affiliated institution, once per
// field and once to the AllSciences slot.
CountTable count_full(std::span<const ClassifiedPublication> pubs);

// Associative and commutative.
void merge_counts(CountTable& into, const CountTable& from);

// One cell per (university, field incl. AllSciences, type incl. Any), ordered
// by university id, field, type.
std::vector<IndicatorCell> university_indicators(const CountTable& counts, const PipelineConfig& config);

// Median of a share vector: middle element for odd sizes, mean of the two
// middle elements for even sizes; nullopt when empty.
std::optional<Ratio> median(std::vector<Ratio> shares);

// Exact arithmetic mean; nullopt when empty.
std::optional<BigRatio> mean(std::span<const Ratio> shares);

std::string format_percent(const BigRatio& share);

// Distribution of university shares for one group (country, region or the
// world) and one (field, type).
struct GroupSummary {
  std::string group;
  Field field = Field::AllSciences;
  OaType oa_type = OaType::Any;
  std::size_t n_universities = 0;  // universities with a defined share
  std::optional<Ratio> median;
  std::optional<BigRatio> mean;
  std::size_t roster_universities = 0;  // universities the roster lists for the group
  bool displayed = true;
};

// Per-country medians over university shares. Every country is computed;
// countries whose roster lists fewer than `min_universities` universities are
// marked not displayed. Ordered by country, field, type.
std::vector<GroupSummary> median_share_by_country(std::span<const IndicatorCell> cells,
                                                  const InstitutionTable& institutions,
                                                  int min_universities);

// A university contributes to every region it belongs to.
std::vector<GroupSummary> region_rollup(std::span<const IndicatorCell> cells,
                                        const InstitutionTable& institutions);

// All universities pooled; group is "World".
std::vector<GroupSummary> world_summary(std::span<const IndicatorCell> cells);

// Overlap of OA types over distinct publications.
struct OverlapMatrix {
  Count total_oa = 0;
  std::array<Count, 4> per_type{};       // indexed by OaType (gold..bronze)
  std::array<Count, 4> with_green{};     // publications both green and the type
  // Exclusive partition of the OA set: green only, then gold / hybrid / bronze
  // each with or without green. Sums to total_oa.
  Count green_only = 0;

  [[nodiscard]] Count partition(OaType type) const;
  [[nodiscard]] std::optional<Ratio> share_of_oa(OaType type) const {
    return make_share(per_type[static_cast<std::size_t>(type)], total_oa);
  }
  [[nodiscard]] std::optional<Ratio> share_also_green(OaType type) const {
    return make_share(with_green[static_cast<std::size_t>(type)], per_type[static_cast<std::size_t>(type)]);
  }

  OverlapMatrix& operator+=(const OverlapMatrix& other);
  friend bool operator==(const OverlapMatrix&, const OverlapMatrix&) = default;
};

OverlapMatrix overlap_matrix(std::span<const ClassifiedPublication> pubs);

// One university's field x type profile (radar plot data).
struct ProfileRow {
  Field field = Field::BiomedicalHealth;
  std::array<std::optional<Ratio>, 5> shares;  // indexed by OaType
};

// Rows for the five main fields in declared order, built from the
// university-scope cells of `inst_id`.
std::vector<ProfileRow> field_profile(std::span<const IndicatorCell> cells, std::string_view inst_id);

}  // namespace oa::indicators
