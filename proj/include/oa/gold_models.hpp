// Country models of gold OA publishing: how much of a country's gold output
// appears in national journals, in English, and in APC-charging journals.
#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oa/classifier.hpp"
#include "oa/line_source.hpp"
#include "oa/model.hpp"

namespace oa::gold {

// Uppercase country (or constituent country) name -> ISO 3166 alpha-2 code.
using CountryLookup = std::map<std::string, std::string, std::less<>>;

// Built-in table covering Web of Science publisher-address spellings
// ("USA", "PEOPLES R CHINA", "ENGLAND", ...).
const CountryLookup& default_country_lookup();

// Reads "name,code" rows and adds them to `lookup` (existing names are
// overridden).
void load_country_lookup(LineSource& in, CountryLookup& lookup);

// Takes the last comma-separated token of the address, drops postal-code
// words (any word containing a digit) and matches the longest trailing word
// sequence against the lookup. Case insensitive.
std::optional<std::string> resolve_journal_country(std::string_view publisher_address,
                                                   const CountryLookup& lookup);

// Registry country when present, otherwise resolved from the address.
std::optional<std::string> journal_country(const JournalRecord& journal, const CountryLookup& lookup);

struct GoldModelRow {
  std::string country;
  Count gold_total = 0;
  Count national = 0;
  Count english = 0;
  Count apc = 0;        // journal has_apc == yes
  Count apc_known = 0;  // journal APC status known (yes or no)
  std::size_t roster_universities = 0;
  bool displayed = true;

  [[nodiscard]] std::optional<Ratio> national_share() const { return make_share(national, gold_total); }
  [[nodiscard]] std::optional<Ratio> english_share() const { return make_share(english, gold_total); }
  // Unknown APC status counts as non-APC, so this is a lower bound.
  [[nodiscard]] std::optional<Ratio> apc_share() const { return make_share(apc, gold_total); }
};

// One row per roster country, ordered by country code. A gold publication
// counts once for each distinct country among its institutions.
std::vector<GoldModelRow> gold_country_model(std::span<const ClassifiedPublication> pubs,
                                             const JournalTable& journals,
                                             const InstitutionTable& institutions,
                                             const CountryLookup& lookup, int min_universities);

}  // namespace oa::gold
