#include "oa/gold_models.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "oa/csv.hpp"
#include "oa/text.hpp"

namespace oa::gold {

const CountryLookup& default_country_lookup() {
  static const CountryLookup table = {
      {"ARGENTINA", "AR"},      {"AUSTRALIA", "AU"},
      {"AUSTRIA", "AT"},        {"BANGLADESH", "BD"},
      {"BELGIUM", "BE"},        {"BRAZIL", "BR"},
      {"BULGARIA", "BG"},       {"CANADA", "CA"},
      {"CHILE", "CL"},          {"CHINA", "CN"},
      {"PEOPLES R CHINA", "CN"}, {"COLOMBIA", "CO"},
      {"CROATIA", "HR"},        {"CUBA", "CU"},
      {"CYPRUS", "CY"},         {"CZECH REPUBLIC", "CZ"},
      {"CZECHIA", "CZ"},        {"DENMARK", "DK"},
      {"EGYPT", "EG"},          {"ESTONIA", "EE"},
      {"ETHIOPIA", "ET"},       {"FINLAND", "FI"},
      {"FRANCE", "FR"},         {"GERMANY", "DE"},
      {"GREECE", "GR"},         {"HUNGARY", "HU"},
      {"ICELAND", "IS"},        {"INDIA", "IN"},
      {"INDONESIA", "ID"},      {"IRAN", "IR"},
      {"IRELAND", "IE"},        {"ISRAEL", "IL"},
      {"ITALY", "IT"},          {"JAPAN", "JP"},
      {"JORDAN", "JO"},         {"KENYA", "KE"},
      {"LATVIA", "LV"},         {"LEBANON", "LB"},
      {"LITHUANIA", "LT"},      {"LUXEMBOURG", "LU"},
      {"MALAYSIA", "MY"},       {"MEXICO", "MX"},
      {"MOROCCO", "MA"},        {"NETHERLANDS", "NL"},
      {"NEW ZEALAND", "NZ"},    {"NIGERIA", "NG"},
      {"NORWAY", "NO"},         {"PAKISTAN", "PK"},
      {"PERU", "PE"},           {"PHILIPPINES", "PH"},
      {"POLAND", "PL"},         {"PORTUGAL", "PT"},
      {"QATAR", "QA"},          {"ROMANIA", "RO"},
      {"RUSSIA", "RU"},         {"SAUDI ARABIA", "SA"},
      {"SERBIA", "RS"},         {"SINGAPORE", "SG"},
      {"SLOVAKIA", "SK"},       {"SLOVENIA", "SI"},
      {"SOUTH AFRICA", "ZA"},   {"SOUTH KOREA", "KR"},
      {"KOREA", "KR"},          {"SPAIN", "ES"},
      {"SWEDEN", "SE"},         {"SWITZERLAND", "CH"},
      {"TAIWAN", "TW"},         {"THAILAND", "TH"},
      {"TUNISIA", "TN"},        {"TURKEY", "TR"},
      {"UKRAINE", "UA"},        {"U ARAB EMIRATES", "AE"},
      {"UNITED ARAB EMIRATES", "AE"}, {"UK", "GB"},
      {"UNITED KINGDOM", "GB"}, {"ENGLAND", "GB"},
      {"SCOTLAND", "GB"},       {"WALES", "GB"},
      {"NORTHERN IRELAND", "GB"}, {"NORTH IRELAND", "GB"},
      {"USA", "US"},            {"UNITED STATES", "US"},
      {"UNITED STATES OF AMERICA", "US"}, {"URUGUAY", "UY"},
      {"VENEZUELA", "VE"},      {"VIETNAM", "VN"},
  };
  return table;
}

void load_country_lookup(LineSource& in, CountryLookup& lookup) {
  csv::Reader reader(in);
  csv::Reader::Record rec;
  bool header = true;
  while (reader.next(rec)) {
    if (rec.blank || !rec.fields || rec.fields->size() < 2) continue;
    if (header) {
      header = false;
      if (text::iequals(text::trim((*rec.fields)[0]), "name")) continue;
    }
    const auto name = text::to_upper(text::trim((*rec.fields)[0]));
    const auto code = text::to_upper(text::trim((*rec.fields)[1]));
    if (!name.empty() && !code.empty()) lookup[name] = code;
  }
}

std::optional<std::string> resolve_journal_country(std::string_view publisher_address,
                                                   const CountryLookup& lookup) {
  auto last = publisher_address;
  if (const auto comma = last.rfind(','); comma != std::string_view::npos) last.remove_prefix(comma + 1);

  std::vector<std::string> words;
  for (auto& word : text::split_list(text::to_upper(last), ' ')) {
    if (std::none_of(word.begin(), word.end(), [](unsigned char c) { return std::isdigit(c); })) {
      words.push_back(std::move(word));
    }
  }
  // Longest trailing sequence first, so "SOUTH AFRICA" beats "AFRICA" and
  // "NY USA" falls back to "USA".
  for (std::size_t start = 0; start < words.size(); ++start) {
    std::string candidate;
    for (std::size_t i = start; i < words.size(); ++i) {
      if (!candidate.empty()) candidate.push_back(' ');
      candidate += words[i];
    }
    if (const auto it = lookup.find(candidate); it != lookup.end()) return it->second;
  }
  return std::nullopt;
}

std::optional<std::string> journal_country(const JournalRecord& journal, const CountryLookup& lookup) {
  if (journal.country) return journal.country;
  if (journal.publisher_address) return resolve_journal_country(*journal.publisher_address, lookup);
  return std::nullopt;
}

std::vector<GoldModelRow> gold_country_model(std::span<const ClassifiedPublication> pubs,
                                             const JournalTable& journals,
                                             const InstitutionTable& institutions,
                                             const CountryLookup& lookup, int min_universities) {
  std::map<std::string, GoldModelRow> rows;
  for (const auto& [id, inst] : institutions) {
    auto& row = rows[inst.country];
    row.country = inst.country;
    ++row.roster_universities;
  }

  std::set<std::string> countries;
  for (const auto& pub : pubs) {
    if (!pub.types.gold()) continue;
    countries.clear();
    for (const auto& id : pub.publication.institution_ids) {
      if (const auto it = institutions.find(id); it != institutions.end()) countries.insert(it->second.country);
    }
    if (countries.empty()) continue;

    const JournalRecord* journal = journals.find(pub.journal_id.empty() ? pub.publication.journal_id : pub.journal_id);
    const auto jcountry = journal ? journal_country(*journal, lookup) : std::nullopt;
    const bool english = pub.publication.language == "en";
    const bool apc = journal && journal->has_apc == ApcStatus::Yes;
    const bool apc_known = journal && journal->has_apc != ApcStatus::Unknown;

    for (const auto& country : countries) {
      auto& row = rows[country];
      ++row.gold_total;
      if (jcountry && *jcountry == country) ++row.national;
      if (english) ++row.english;
      if (apc) ++row.apc;
      if (apc_known) ++row.apc_known;
    }
  }

  std::vector<GoldModelRow> out;
  out.reserve(rows.size());
  for (auto& [country, row] : rows) {
    row.displayed = row.roster_universities >= static_cast<std::size_t>(min_universities);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace oa::gold
