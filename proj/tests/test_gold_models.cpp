#include <doctest.h>

#include <random>
#include <sstream>

#include "oa/gold_models.hpp"
#include "support/test_support.hpp"

using namespace oa;
using namespace oa::gold;
using namespace oa::testing;

namespace {
const OATypeSet kGold(true, false, false, false);

JournalRecord journal(std::string id, std::optional<std::string> country, ApcStatus apc,
                      std::optional<std::string> address = std::nullopt) {
  JournalRecord j;
  j.journal_id = std::move(id);
  j.country = std::move(country);
  j.is_fully_oa = true;
  j.has_apc = apc;
  j.publisher_address = std::move(address);
  return j;
}
}  // namespace

TEST_CASE("resolve_journal_country") {
  const auto& lookup = default_country_lookup();
  CHECK(resolve_journal_country("NEW YORK, NY 10013 USA", lookup) == "US");
  CHECK(resolve_journal_country("LONDON, ENGLAND", lookup) == "GB");
  CHECK(resolve_journal_country("london, england", lookup) == "GB");
  CHECK(resolve_journal_country("BEIJING 100717, PEOPLES R CHINA", lookup) == "CN");
  CHECK(resolve_journal_country("UNKNOWN PLACE", lookup) == std::nullopt);
  CHECK(resolve_journal_country("", lookup) == std::nullopt);
}

TEST_CASE("load_country_lookup adds and overrides names") {
  CountryLookup lookup = default_country_lookup();
  std::istringstream in("name,code\natlantis,AT\nusa,XX\n");
  StreamLineSource src(in);
  load_country_lookup(src, lookup);
  CHECK(resolve_journal_country("CITY, ATLANTIS", lookup) == "AT");
  CHECK(resolve_journal_country("NEW YORK, USA", lookup) == "XX");
}

TEST_CASE("journal_country prefers the registry value") {
  const auto& lookup = default_country_lookup();
  CHECK(journal_country(journal("J", "BR", ApcStatus::No, "LONDON, ENGLAND"), lookup) == "BR");
  CHECK(journal_country(journal("J", std::nullopt, ApcStatus::No, "LONDON, ENGLAND"), lookup) == "GB");
  CHECK(journal_country(journal("J", std::nullopt, ApcStatus::No), lookup) == std::nullopt);
}

TEST_CASE("gold_country_model: shares") {
  InstitutionTable insts;
  insts.emplace("BR1", institution("BR1", "BR", {"South America"}));
  insts.emplace("GB1", institution("GB1", "GB", {"Europe"}));
  JournalTable journals;
  journals.insert(journal("JBR", "BR", ApcStatus::No));
  journals.insert(journal("JGB", std::nullopt, ApcStatus::Yes, "LONDON, ENGLAND"));
  journals.insert(journal("JUK", std::nullopt, ApcStatus::Unknown));

  auto gold_pub = [](std::string id, std::string journal_id, std::string lang, std::vector<std::string> insts) {
    auto pub = publication(std::move(id), std::move(insts));
    pub.journal_id = std::move(journal_id);
    pub.language = std::move(lang);
    return classified(pub, kGold);
  };

  SUBCASE("four gold pubs, two national") {
    std::vector<ClassifiedPublication> pubs = {
        gold_pub("P1", "JBR", "pt", {"BR1"}),
        gold_pub("P2", "JBR", "en", {"BR1"}),
        gold_pub("P3", "JGB", "en", {"BR1"}),
        gold_pub("P4", "JUK", "en", {"BR1"}),
        classified(publication("P5", {"BR1"}), OATypeSet()),  // not gold, ignored
    };
    const auto rows = gold_country_model(pubs, journals, insts, default_country_lookup(), 1);
    REQUIRE(rows.size() == 2);
    const auto& br = rows[0];
    CHECK(br.country == "BR");
    CHECK(br.gold_total == 4);
    CHECK(br.national_share() == Ratio(1, 2));
    CHECK(br.english_share() == Ratio(3, 4));
    CHECK(br.apc_share() == Ratio(1, 4));  // unknown APC is not counted as APC
    CHECK(br.apc_known == 3);

    const auto& gb = rows[1];
    CHECK(gb.gold_total == 0);
    CHECK_FALSE(gb.national_share().has_value());
    CHECK_FALSE(gb.english_share().has_value());
    CHECK_FALSE(gb.apc_share().has_value());
  }

  SUBCASE("full counting across two countries") {
    std::vector<ClassifiedPublication> pubs = {gold_pub("P1", "JGB", "en", {"BR1", "GB1"})};
    const auto rows = gold_country_model(pubs, journals, insts, default_country_lookup(), 1);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].gold_total == 1);
    CHECK(rows[1].gold_total == 1);
    CHECK(rows[0].national == 0);
    CHECK(rows[1].national == 1);
  }

  SUBCASE("display threshold uses the roster size") {
    const auto rows = gold_country_model({}, journals, insts, default_country_lookup(), 2);
    for (const auto& r : rows) CHECK_FALSE(r.displayed);
  }
}

TEST_CASE("apc_share is a lower bound on every resolution of unknown status") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto corpus = make_random_corpus(seed, 3000);
    const auto pubs = classify_stream(corpus.publications, corpus.evidence, corpus.journals);
    const auto base = gold_country_model(pubs, corpus.journals, corpus.institutions, default_country_lookup(), 5);

    JournalTable all_yes;
    for (auto [id, j] : corpus.journals.records()) {
      if (j.has_apc == ApcStatus::Unknown) j.has_apc = ApcStatus::Yes;
      all_yes.insert(j);
    }
    const auto upper = gold_country_model(pubs, all_yes, corpus.institutions, default_country_lookup(), 5);
    REQUIRE(base.size() == upper.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      CHECK(base[i].apc <= upper[i].apc);
      CHECK(base[i].apc <= base[i].apc_known);
      CHECK(base[i].national <= base[i].gold_total);
      CHECK(base[i].english <= base[i].gold_total);
    }
  }
}
