#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hybridpir/mds_codebook.hpp"
#include "hybridpir/partition_loads.hpp"
#include "hybridpir/random.hpp"
#include "hybridpir/rational.hpp"
#include "hybridpir/storage_planner.hpp"

namespace hybridpir {

// A concrete row of a concrete message, as a database sees it.
struct RowRef {
  int message = 0;
  std::int64_t row = 0;

  friend auto operator<=>(const RowRef&, const RowRef&) = default;
};

// Private row relabeling: order[m][p][slot] is the position inside L_S
// (partition p) that the schedule's slot-th fresh row of message m maps to.
struct PermutationState {
  std::vector<std::vector<std::vector<std::int64_t>>> order;

  static PermutationState identity(const SystemParams& params, const PartitionMap& pmap);
  static PermutationState random(const SystemParams& params, const PartitionMap& pmap, Rng& rng);
};

enum class InstanceKind {
  kDesired,    // one fresh row of the desired message
  kUndesired,  // a sum of fresh rows, one per message of an undesired subset
};

// The unit the user decodes from K equations. Undesired instances are
// downloaded as the same sum at K databases, decoded to a row-sum vector, and
// then reused as side information at the t - K other databases of their
// partition in the next round.
struct SumInstance {
  std::size_t id = 0;
  int round = 0;           // 1-based
  InstanceKind kind = InstanceKind::kDesired;
  std::uint32_t subset = 0;  // bitmask of the atom's messages
  int partition = 0;
  std::vector<RowRef> rows;
  std::vector<int> download_databases;
  std::vector<int> reuse_databases;  // undesired only
};

struct QueryAtom {
  int database = 0;
  int round = 0;
  std::uint32_t subset = 0;
  int partition = 0;
  std::size_t instance = 0;
  std::optional<std::size_t> side_instance;
  std::vector<RowRef> rows;  // sorted by message
};

struct RetrievalSchedule {
  SystemParams params;
  int desired = 0;
  std::vector<SumInstance> instances;
  std::vector<std::vector<QueryAtom>> atoms;  // per database, canonical order

  std::int64_t total_atoms() const;
};

// Throws InfeasibleParametersError for t < K, DomainError for a desired index
// outside [0, M), and FeasibilityError if side information cannot be matched.
RetrievalSchedule build_schedule(const SystemParams& params, const PartitionMap& pmap,
                                 int desired, const PermutationState& perms);

RetrievalSchedule build_schedule(const SystemParams& params, const PartitionMap& pmap,
                                 const RoundLoads& loads, int desired,
                                 const PermutationState& perms);

// What a database receives: atom i asks for h_n^T (sum of atoms[i]).
struct QuerySet {
  int database = 0;
  std::vector<std::vector<RowRef>> atoms;

  friend bool operator==(const QuerySet&, const QuerySet&) = default;
};

struct QueryBundle {
  std::vector<QuerySet> queries;
  // origin[n][i]: index into schedule.atoms[n] of query atom i.
  std::vector<std::vector<std::size_t>> origin;
};

// Canonically sorts each database's atoms, then shuffles them with rng.
QueryBundle queries_from_schedule(const RetrievalSchedule& schedule, Rng& rng);

struct AnswerSet {
  int database = 0;
  std::vector<FieldElement> values;
};

// Throws ProtocolViolationError if an atom names a row the database lacks,
// ConfigurationError if the query is addressed to another database.
AnswerSet answer(const DatabaseContent& content, const QuerySet& query, const MdsCodebook& cb);

struct DecodeStep {
  std::size_t instance = 0;
  int round = 0;
  InstanceKind kind = InstanceKind::kDesired;
  std::vector<int> databases;
  std::vector<std::optional<std::size_t>> cancelled;  // side instance per database
};

// Reconstructs the desired message (R rows of K symbols). Throws
// DecodingIntegrityError when the answers do not match the schedule.
std::vector<MessageRow> decode(const RetrievalSchedule& schedule, const QueryBundle& bundle,
                               const std::vector<AnswerSet>& answers, const MdsCodebook& cb,
                               std::vector<DecodeStep>* trace = nullptr);

// Downloaded symbols / L, exact.
Rational normalized_download_cost(const RetrievalSchedule& schedule);

// Structural checks on a schedule; returns one message per violation.
std::vector<std::string> check_schedule_invariants(const RetrievalSchedule& schedule,
                                                   const PartitionMap& pmap);

}  // namespace hybridpir
