#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hybridpir/rational.hpp"
#include "hybridpir/storage_planner.hpp"

namespace hybridpir {

enum class AuditMode { kExhaustive, kSampled };

struct AuditOptions {
  AuditMode mode = AuditMode::kSampled;
  std::uint64_t trials = 10000;
  // Exhaustive mode refuses to enumerate more permutation outcomes than this.
  std::uint64_t enumeration_bound = 1'000'000;
  double threshold = 0.05;
  std::uint64_t seed = 1;
  std::optional<int> database;  // all databases when unset
  // Mutation switch: run the engine with identity permutations.
  bool disable_permutations = false;
};

struct PrivacyPair {
  int database = 0;
  int desired_a = 0;
  int desired_b = 0;
  double distance = 0.0;
  std::optional<Rational> exact_distance;  // exhaustive mode
  bool pass = false;
};

struct PrivacyReport {
  AuditMode mode = AuditMode::kSampled;
  std::uint64_t outcomes = 0;  // enumerated outcomes or sampled trials per message
  double threshold = 0.0;
  std::vector<PrivacyPair> pairs;
  double max_distance = 0.0;
  bool pass = true;
};

// Total-variation distance between the query distributions a database sees
// for each pair of desired messages.
//
// Exhaustive mode enumerates every permutation outcome and compares exact
// distributions over canonical (sorted) query multisets; the uniform atom
// shuffle is independent of everything else, so this equals the distance
// over ordered queries. Passes iff every distance is exactly zero.
//
// Sampled mode compares empirical distributions of two projections of the
// query: (atom arity, message, row) per referenced row, and the (message,
// partition) signature per atom. Reports the larger distance; passes iff it
// is at most the threshold.
//
// Throws EnumerationBoundError when exhaustive enumeration is too large.
PrivacyReport audit_privacy(const SystemParams& params, const PartitionMap& pmap,
                            const AuditOptions& options);

// Number of permutation outcomes exhaustive mode would enumerate, saturating
// at UINT64_MAX.
std::uint64_t permutation_outcomes(const SystemParams& params, const PartitionMap& pmap);

}  // namespace hybridpir
