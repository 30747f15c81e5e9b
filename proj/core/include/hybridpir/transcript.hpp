#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hybridpir/mds_codebook.hpp"
#include "hybridpir/pir_engine.hpp"

namespace hybridpir {

// Query table with one column per database, atoms in schedule order and a
// rule between rounds. Rows are relabeled x_1, x_2, ... per message in order
// of first appearance, so two schedules with the same structure render the
// same table up to that relabeling. Entries read like "h1'(x13[1]+x2[2])".
std::string render_query_table(const RetrievalSchedule& schedule);

struct TranscriptInfo {
  std::uint64_t seed = 0;
  std::string field;
  bool decode_ok = false;
};

// Full run record: parameters, per-database queries (as sent) and answers,
// the decode trace, the cost, and the rendered query table.
std::string transcript_to_json(const RetrievalSchedule& schedule, const QueryBundle& bundle,
                               const std::vector<AnswerSet>& answers,
                               const std::vector<DecodeStep>& trace, const TranscriptInfo& info);

}  // namespace hybridpir
