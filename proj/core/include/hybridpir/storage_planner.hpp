#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hybridpir/field.hpp"
#include "hybridpir/mds_codebook.hpp"
#include "hybridpir/random.hpp"
#include "hybridpir/rational.hpp"

namespace hybridpir {

// Sizes of one hybrid storage + retrieval instance. Indices elsewhere in the
// library are 0-based; counts here are plain integers.
//
// Retrieval runs in rounds r = 1..M. In round r every database receives
// atoms_per_round[r-1] atoms for each r-subset of messages, and each
// partition contributes instances_per_round[r-1] sum instances (desired rows
// or undesired sums) per r-subset.
struct SystemParams {
  int databases = 0;   // N
  int messages = 0;    // M
  int span = 0;        // t: databases storing each row partition
  int dimension = 0;   // K: MDS code dimension
  std::int64_t multiplier = 0;          // c
  std::int64_t partitions = 0;          // C(N, t)
  std::int64_t rows_per_partition = 0;  // |L_S|
  std::int64_t rows_per_message = 0;    // R
  std::int64_t message_length = 0;      // L = R * K symbols
  std::vector<std::int64_t> instances_per_round;
  std::vector<std::int64_t> atoms_per_round;

  // t / (K N), exact.
  Rational storage_ratio() const;
};

// Checks 1 <= K <= t <= N and M >= 1. Throws InfeasibleParametersError.
void validate_parameters(int databases, int messages, int span, int dimension);

// Sizes at a fixed multiplier c, or nullopt when some count is fractional.
std::optional<SystemParams> params_for_multiplier(int databases, int messages, int span,
                                                  int dimension, std::int64_t multiplier);

// Smallest c whose counts are all integral and whose round-one loads can be
// balanced across databases. Throws InfeasibleParametersError, or
// FeasibilityError if no c up to max_multiplier works.
SystemParams plan(int databases, int messages, int span, int dimension,
                  std::int64_t max_multiplier = std::int64_t{1} << 24);

Rational storage_ratio(const SystemParams& params);

// All size-`span` subsets of {0..databases-1}, lexicographic.
std::vector<std::vector<int>> enumerate_subsets(int databases, int span);

// L_S for every t-subset S. Subsets are enumerated lexicographically and rows
// are dealt round-robin, so partition p holds rows p, p + P, p + 2P, ...
struct PartitionMap {
  int databases = 0;
  std::vector<std::vector<int>> subsets;
  std::vector<std::vector<std::int64_t>> rows;
  std::vector<int> partition_of_row;

  std::size_t size() const { return subsets.size(); }
  bool stores(int partition, int database) const;
  // Partitions whose subset contains the database, ascending.
  std::vector<int> partitions_at(int database) const;
};

PartitionMap build_partition_map(const SystemParams& params);

// M messages, each R rows of K symbols.
struct MessageSet {
  std::vector<std::vector<MessageRow>> messages;

  std::size_t count() const { return messages.size(); }
  std::size_t rows() const { return messages.empty() ? 0 : messages.front().size(); }
  std::size_t row_length() const;
};

MessageSet random_messages(const SystemParams& params, const Field& field, Rng& rng);
MessageSet zero_messages(const SystemParams& params, const Field& field);

// Z_n: the coded symbols y_{n,j}^{[m]} for every row j in a partition whose
// subset contains n.
class DatabaseContent {
 public:
  DatabaseContent(int database, std::vector<std::int64_t> rows, std::int64_t total_rows,
                  std::vector<FieldVector> symbols);

  int database() const { return database_; }
  const std::vector<std::int64_t>& rows() const { return rows_; }
  bool stores(std::int64_t row) const;
  // Throws ProtocolViolationError for a row this database does not hold.
  const FieldElement& symbol(int message, std::int64_t row) const;
  std::size_t message_count() const { return symbols_.size(); }
  std::int64_t symbol_count() const;

 private:
  int database_;
  std::vector<std::int64_t> rows_;
  std::vector<std::int64_t> slot_of_row_;
  std::vector<FieldVector> symbols_;
};

// Throws ConfigurationError on shape mismatch between params, messages and
// codebook.
std::vector<DatabaseContent> materialize(const SystemParams& params, const PartitionMap& pmap,
                                         const MessageSet& messages, const MdsCodebook& cb);

}  // namespace hybridpir
