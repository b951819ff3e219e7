#include "oa/model.hpp"

#include <fmt/format.h>

#include <charconv>
#include <numeric>

#include "oa/text.hpp"

namespace oa {

// ---------------------------------------------------------------------------
// Ratio

Ratio::Ratio(Count numerator, Count denominator) : num_(numerator), den_(denominator) {
  if (den_ <= 0) throw std::invalid_argument("Ratio: denominator must be positive");
  if (num_ < 0) throw std::invalid_argument("Ratio: numerator must be non-negative");
  const Count g = std::gcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

Ratio Ratio::midpoint(const Ratio& a, const Ratio& b) {
  const Count l = std::lcm(a.den_, b.den_);
  const __int128 sum = static_cast<__int128>(a.num_) * (l / a.den_) +
                       static_cast<__int128>(b.num_) * (l / b.den_);
  const __int128 den = static_cast<__int128>(l) * 2;
  // Reduce in 128 bits before narrowing.
  __int128 x = sum, y = den;
  while (y != 0) {
    const __int128 t = x % y;
    x = y;
    y = t;
  }
  const __int128 g = x == 0 ? 1 : x;
  return Ratio(static_cast<Count>(sum / g), static_cast<Count>(den / g));
}

std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) noexcept {
  const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
  const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::optional<Ratio> make_share(Count numerator, Count denominator) {
  if (denominator == 0) return std::nullopt;
  return Ratio(numerator, denominator);
}

std::string format_percent(const Ratio& share) {
  // tenths of a percent, half up: floor((1000 n + d/2) / d)
  const __int128 n = share.numerator();
  const __int128 d = share.denominator();
  const auto tenths = static_cast<long long>((n * 2000 + d) / (2 * d));
  return fmt::format("{}.{}", tenths / 10, tenths % 10);
}

std::string format_percent(const std::optional<Ratio>& share) {
  return share ? format_percent(*share) : std::string();
}

// ---------------------------------------------------------------------------
// Enumerations

namespace {
struct FieldInfo {
  Field field;
  std::string_view code;
  std::string_view name;
};
constexpr std::array<FieldInfo, 6> kFieldInfo = {{
    {Field::BiomedicalHealth, "BHS", "Biomedical and health sciences"},
    {Field::LifeEarth, "LES", "Life and earth sciences"},
    {Field::MathComputer, "MCS", "Mathematics and computer science"},
    {Field::PhysicalEngineering, "PSE", "Physical sciences and engineering"},
    {Field::SocialHumanities, "SSH", "Social sciences and humanities"},
    {Field::AllSciences, "ALL", "All sciences"},
}};
}  // namespace

std::string_view field_name(Field field) noexcept {
  return kFieldInfo[static_cast<std::size_t>(field)].name;
}

std::optional<Field> parse_field(std::string_view text) {
  text = text::trim(text);
  for (const auto& info : kFieldInfo) {
    if (info.field == Field::AllSciences) continue;
    if (text::iequals(text, info.code) || text::iequals(text, info.name)) return info.field;
  }
  return std::nullopt;
}

std::string_view oa_type_name(OaType type) noexcept {
  switch (type) {
    case OaType::Gold: return "gold";
    case OaType::Green: return "green";
    case OaType::Hybrid: return "hybrid";
    case OaType::Bronze: return "bronze";
    case OaType::Any: return "any";
  }
  return "?";
}

std::string_view doc_type_name(DocType type) noexcept {
  switch (type) {
    case DocType::Article: return "article";
    case DocType::Review: return "review";
    case DocType::Letter: return "letter";
  }
  return "?";
}

std::optional<DocType> parse_doc_type(std::string_view text) {
  text = text::trim(text);
  if (text::iequals(text, "article")) return DocType::Article;
  if (text::iequals(text, "review")) return DocType::Review;
  if (text::iequals(text, "letter")) return DocType::Letter;
  return std::nullopt;
}

std::string_view apc_status_name(ApcStatus status) noexcept {
  switch (status) {
    case ApcStatus::Yes: return "yes";
    case ApcStatus::No: return "no";
    case ApcStatus::Unknown: return "unknown";
  }
  return "?";
}

std::string_view scope_name(Scope scope) noexcept {
  switch (scope) {
    case Scope::University: return "university";
    case Scope::Country: return "country";
    case Scope::Region: return "region";
    case Scope::World: return "world";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// DOI

std::optional<std::string> normalize_doi(std::string_view raw) {
  static constexpr std::array<std::string_view, 6> kPrefixes = {
      "https://doi.org/",    "http://doi.org/", "https://dx.doi.org/",
      "http://dx.doi.org/", "doi.org/",        "doi:"};
  std::string doi = text::to_lower(text::trim(raw));
  bool stripped = true;
  while (stripped) {
    stripped = false;
    for (const auto prefix : kPrefixes) {
      if (doi.starts_with(prefix)) {
        doi = std::string(text::trim(std::string_view(doi).substr(prefix.size())));
        stripped = true;
      }
    }
  }
  if (!doi.starts_with("10.")) return std::nullopt;
  return doi;
}

// ---------------------------------------------------------------------------
// OATypeSet

OATypeSet::OATypeSet(bool gold, bool green, bool hybrid, bool bronze)
    : gold_(gold), green_(green), hybrid_(hybrid), bronze_(bronze) {
  if (int{gold} + int{hybrid} + int{bronze} > 1) {
    throw std::logic_error("OATypeSet: gold, hybrid and bronze are mutually exclusive");
  }
}

bool OATypeSet::has(OaType type) const noexcept {
  switch (type) {
    case OaType::Gold: return gold_;
    case OaType::Green: return green_;
    case OaType::Hybrid: return hybrid_;
    case OaType::Bronze: return bronze_;
    case OaType::Any: return any_oa();
  }
  return false;
}

// ---------------------------------------------------------------------------
// JournalTable

bool JournalTable::insert(JournalRecord record) {
  if (by_id_.contains(record.journal_id)) return false;
  for (const auto& issn : record.issns) issn_to_id_.try_emplace(issn, record.journal_id);
  auto id = record.journal_id;
  by_id_.emplace(std::move(id), std::move(record));
  return true;
}

const JournalRecord* JournalTable::find(std::string_view journal_id) const {
  const auto it = by_id_.find(journal_id);
  return it == by_id_.end() ? nullptr : &it->second;
}

const JournalRecord* JournalTable::find_by_issn(std::string_view issn) const {
  const auto it = issn_to_id_.find(issn);
  return it == issn_to_id_.end() ? nullptr : find(it->second);
}

// ---------------------------------------------------------------------------
// Config

YearRange parse_year_range(std::string_view text) {
  auto parse_year = [](std::string_view s) {
    s = text::trim(s);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw ConfigError(fmt::format("invalid year '{}'", s));
    }
    return value;
  };
  const auto dash = text.find('-');
  YearRange range;
  if (dash == std::string_view::npos) {
    range.first = range.last = parse_year(text);
  } else {
    range.first = parse_year(text.substr(0, dash));
    range.last = parse_year(text.substr(dash + 1));
  }
  if (range.first > range.last) throw ConfigError(fmt::format("empty period '{}'", text));
  return range;
}

void PipelineConfig::validate() const {
  if (min_universities_country < 1) throw ConfigError("--min-universities must be >= 1");
  if (min_universities_gold_model < 1) throw ConfigError("--min-universities-gold must be >= 1");
  if (period.first > period.last) throw ConfigError("period is empty");
  if (handle_pattern.empty()) throw ConfigError("--handle-pattern must not be empty");
  for (const auto& p : pmc_url_patterns) {
    if (p.empty()) throw ConfigError("--pmc-pattern must not be empty");
  }
}

}  // namespace oa
