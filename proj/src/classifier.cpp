#include "oa/classifier.hpp"

#include <algorithm>
#include <thread>

namespace oa {

OATypeSet classify(const OAEvidenceRecord* evidence, const JournalRecord* journal) {
  if (evidence == nullptr || evidence->locations.empty()) return {};

  bool repository = false;
  bool publisher_licensed = false;
  bool publisher_free = false;
  for (const auto& loc : evidence->locations) {
    if (loc.host_type == HostType::Repository) {
      repository = true;
    } else if (loc.licensed()) {
      publisher_licensed = true;
    } else {
      publisher_free = true;
    }
  }

  const bool oa_journal = evidence->journal_is_oa || (journal != nullptr && journal->is_fully_oa);
  const bool gold = oa_journal;
  const bool hybrid = !gold && publisher_licensed;
  const bool bronze = !gold && !hybrid && publisher_free;
  return OATypeSet(gold, repository, hybrid, bronze);
}

const JournalRecord* resolve_journal(const PublicationRecord& pub, const OAEvidenceRecord* evidence,
                                     const JournalTable& journals) {
  if (const auto* j = journals.find(pub.journal_id)) return j;
  if (evidence != nullptr && evidence->journal_issn) return journals.find_by_issn(*evidence->journal_issn);
  return nullptr;
}

namespace {
void classify_range(std::span<const PublicationRecord> pubs, const EvidenceIndex& evidence_by_doi,
                    const JournalTable& journals, std::span<ClassifiedPublication> out) {
  for (std::size_t i = 0; i < pubs.size(); ++i) {
    const auto& pub = pubs[i];
    const OAEvidenceRecord* evidence = nullptr;
    if (pub.doi) {
      if (const auto it = evidence_by_doi.find(*pub.doi); it != evidence_by_doi.end()) evidence = &it->second;
    }
    auto& result = out[i];
    result.publication = pub;
    const JournalRecord* journal = resolve_journal(pub, evidence, journals);
    result.types = classify(evidence, journal);
    if (journal != nullptr) result.journal_id = journal->journal_id;
    if (evidence != nullptr) result.locations_used = evidence->locations;
  }
}
}  // namespace

std::vector<ClassifiedPublication> classify_stream(std::span<const PublicationRecord> publications,
                                                   const EvidenceIndex& evidence_by_doi,
                                                   const JournalTable& journals, std::size_t shards) {
  std::vector<ClassifiedPublication> out(publications.size());
  shards = std::clamp<std::size_t>(shards, 1, std::max<std::size_t>(publications.size(), 1));
  if (shards == 1) {
    classify_range(publications, evidence_by_doi, journals, out);
    return out;
  }
  const std::size_t chunk = (publications.size() + shards - 1) / shards;
  {
    std::vector<std::jthread> workers;
    for (std::size_t begin = 0; begin < publications.size(); begin += chunk) {
      const std::size_t len = std::min(chunk, publications.size() - begin);
      workers.emplace_back([&, begin, len] {
        classify_range(publications.subspan(begin, len), evidence_by_doi, journals,
                       std::span(out).subspan(begin, len));
      });
    }
  }
  return out;
}

}  // namespace oa
