// Core domain types shared by every stage of the OA indicator pipeline.
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace oa {

using Count = std::int64_t;

// Thrown for invalid configuration values (bad thresholds, empty period, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when an input cannot be opened or read.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Exact non-negative rational used for every share. Always stored reduced with
// a positive denominator, so equality is structural.
class Ratio {
 public:
  Ratio(Count numerator, Count denominator);

  [[nodiscard]] Count numerator() const noexcept { return num_; }
  [[nodiscard]] Count denominator() const noexcept { return den_; }
  [[nodiscard]] double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  // Mean of two ratios; used for even-length medians.
  [[nodiscard]] static Ratio midpoint(const Ratio& a, const Ratio& b);

  friend bool operator==(const Ratio&, const Ratio&) = default;
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) noexcept;

 private:
  Count num_;
  Count den_;
};

// numerator/denominator, or nullopt when the denominator is zero.
std::optional<Ratio> make_share(Count numerator, Count denominator);

// Renders a share in [0,1] as a percentage with one decimal ("97.7"),
// rounding half up on the exact value.
std::string format_percent(const Ratio& share);
// Empty string for a null share.
std::string format_percent(const std::optional<Ratio>& share);

// ---------------------------------------------------------------------------
// Leiden Ranking main fields. AllSciences is the rollup and never appears in a
// publication's own field list.
enum class Field : std::uint8_t {
  BiomedicalHealth = 0,
  LifeEarth = 1,
  MathComputer = 2,
  PhysicalEngineering = 3,
  SocialHumanities = 4,
  AllSciences = 5,
};

inline constexpr std::array<Field, 5> kMainFields = {
    Field::BiomedicalHealth, Field::LifeEarth, Field::MathComputer,
    Field::PhysicalEngineering, Field::SocialHumanities};
inline constexpr std::array<Field, 6> kReportFields = {
    Field::BiomedicalHealth,    Field::LifeEarth,        Field::MathComputer,
    Field::PhysicalEngineering, Field::SocialHumanities, Field::AllSciences};

std::string_view field_name(Field field) noexcept;
// Accepts the short codes (BHS, LES, MCS, PSE, SSH) or the full names, case
// insensitive. AllSciences is not a valid publication field.
std::optional<Field> parse_field(std::string_view text);

enum class OaType : std::uint8_t { Gold = 0, Green = 1, Hybrid = 2, Bronze = 3, Any = 4 };

inline constexpr std::array<OaType, 4> kOaTypes = {OaType::Gold, OaType::Green,
                                                   OaType::Hybrid, OaType::Bronze};
inline constexpr std::array<OaType, 5> kReportTypes = {
    OaType::Gold, OaType::Green, OaType::Hybrid, OaType::Bronze, OaType::Any};

std::string_view oa_type_name(OaType type) noexcept;

enum class DocType : std::uint8_t { Article, Review, Letter };

std::string_view doc_type_name(DocType type) noexcept;
std::optional<DocType> parse_doc_type(std::string_view text);

// ---------------------------------------------------------------------------
// Lowercases, trims and strips resolver prefixes ("doi:", "https://doi.org/",
// "http://dx.doi.org/", ...). Returns nullopt unless the result starts with
// "10.".
std::optional<std::string> normalize_doi(std::string_view raw);

struct PublicationRecord {
  std::string pub_id;
  std::optional<std::string> doi;
  int year = 0;
  DocType doc_type = DocType::Article;
  std::string language;  // ISO-639-1, empty when unknown
  std::string journal_id;
  std::vector<std::string> institution_ids;  // sorted, distinct
  std::vector<Field> field_ids;              // sorted, distinct, non-empty
};

enum class HostType : std::uint8_t { Publisher, Repository };

struct OALocation {
  HostType host_type = HostType::Publisher;
  std::string url;
  std::optional<std::string> license;
  std::optional<std::string> endpoint_hint;

  [[nodiscard]] bool licensed() const noexcept { return license && !license->empty(); }
};

struct OAEvidenceRecord {
  std::string doi;
  bool journal_is_oa = false;
  std::optional<std::string> journal_issn;
  std::vector<OALocation> locations;
};

// Classification outcome. Gold, hybrid and bronze are mutually exclusive;
// green may accompany any of them. Construction enforces both invariants.
class OATypeSet {
 public:
  OATypeSet() = default;
  // Throws std::logic_error if more than one of gold/hybrid/bronze is set.
  OATypeSet(bool gold, bool green, bool hybrid, bool bronze);

  [[nodiscard]] bool gold() const noexcept { return gold_; }
  [[nodiscard]] bool green() const noexcept { return green_; }
  [[nodiscard]] bool hybrid() const noexcept { return hybrid_; }
  [[nodiscard]] bool bronze() const noexcept { return bronze_; }
  [[nodiscard]] bool any_oa() const noexcept { return gold_ || green_ || hybrid_ || bronze_; }
  [[nodiscard]] bool has(OaType type) const noexcept;

  friend bool operator==(const OATypeSet&, const OATypeSet&) = default;

 private:
  bool gold_ = false;
  bool green_ = false;
  bool hybrid_ = false;
  bool bronze_ = false;
};

struct Institution {
  std::string inst_id;
  std::string name;
  std::string country;                         // ISO code, uppercase
  std::vector<std::string> regions;            // non-empty
  std::vector<std::string> repo_url_patterns;  // normalized
};

enum class ApcStatus : std::uint8_t { Yes, No, Unknown };

std::string_view apc_status_name(ApcStatus status) noexcept;

struct JournalRecord {
  std::string journal_id;
  std::vector<std::string> issns;
  std::optional<std::string> country;
  bool is_fully_oa = false;
  ApcStatus has_apc = ApcStatus::Unknown;
  std::optional<std::string> publisher_address;
};

using InstitutionTable = std::map<std::string, Institution>;

class JournalTable {
 public:
  // Returns false (and keeps the existing entry) on a duplicate journal_id.
  bool insert(JournalRecord record);

  [[nodiscard]] const JournalRecord* find(std::string_view journal_id) const;
  [[nodiscard]] const JournalRecord* find_by_issn(std::string_view issn) const;
  [[nodiscard]] std::size_t size() const noexcept { return by_id_.size(); }
  [[nodiscard]] const std::map<std::string, JournalRecord, std::less<>>& records() const noexcept {
    return by_id_;
  }

 private:
  std::map<std::string, JournalRecord, std::less<>> by_id_;
  std::map<std::string, std::string, std::less<>> issn_to_id_;
};

enum class Scope : std::uint8_t { University, Country, Region, World };

std::string_view scope_name(Scope scope) noexcept;

struct IndicatorCell {
  Scope scope = Scope::University;
  std::string scope_id;
  Field field = Field::AllSciences;
  OaType oa_type = OaType::Any;
  Count numerator = 0;
  Count denominator = 0;

  [[nodiscard]] std::optional<Ratio> share() const { return make_share(numerator, denominator); }
};

struct YearRange {
  int first = 2014;
  int last = 2017;

  [[nodiscard]] bool contains(int year) const noexcept { return year >= first && year <= last; }
};

// Parses "2014-2017" or a single year "2015".
YearRange parse_year_range(std::string_view text);

enum class DenominatorMode : std::uint8_t { AllPubs, DoiPubs };

struct PipelineConfig {
  int min_universities_country = 10;
  int min_universities_gold_model = 5;
  DenominatorMode denominator_mode = DenominatorMode::AllPubs;
  std::vector<std::string> pmc_url_patterns = {"ncbi.nlm.nih.gov/pmc"};
  std::string handle_pattern = "hdl.handle.net";
  YearRange period;

  // Throws ConfigError on thresholds < 1, an empty period or empty patterns.
  void validate() const;
};

}  // namespace oa
