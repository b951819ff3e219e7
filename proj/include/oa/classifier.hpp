// OA type assignment from Unpaywall-style evidence.
//
// Precedence: an OA journal makes any available copy gold, which suppresses
// hybrid and bronze. Otherwise a licensed publisher copy is hybrid and an
// unlicensed one is bronze. Green (a repository copy) is independent and may
// accompany any of the other three.
#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "oa/model.hpp"

namespace oa {

struct ClassifiedPublication {
  PublicationRecord publication;
  OATypeSet types;
  std::vector<OALocation> locations_used;
  // Registry journal the classification used; empty when none matched.
  std::string journal_id;
};

// Either argument may be null. Total and independent of location order.
OATypeSet classify(const OAEvidenceRecord* evidence, const JournalRecord* journal);

using EvidenceIndex = std::unordered_map<std::string, OAEvidenceRecord>;

// Journal of a publication: by journal_id, falling back to the evidence ISSN.
const JournalRecord* resolve_journal(const PublicationRecord& pub, const OAEvidenceRecord* evidence,
                                     const JournalTable& journals);

// Classifies every publication exactly once, preserving input order. Work is
// split into `shards` contiguous ranges processed on separate threads.
std::vector<ClassifiedPublication> classify_stream(std::span<const PublicationRecord> publications,
                                                   const EvidenceIndex& evidence_by_doi,
                                                   const JournalTable& journals,
                                                   std::size_t shards = 1);

}  // namespace oa
