#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace hybridpir {

struct SystemParams;

enum class LoadStrategy {
  kGreedyThenAugment,  // greedy first, max-flow if greedy gets stuck
  kAugmentOnly,
};

// Chooses an integer load a[p][n] (zero unless subsets[p] contains n) with
// every partition summing to per_partition and every database summing to
// per_database, each entry within one of per_partition / |subset|. Returns
// nullopt when no such matrix exists.
std::optional<std::vector<std::vector<std::int64_t>>> balance_loads(
    const std::vector<std::vector<int>>& subsets, int databases, std::int64_t per_partition,
    std::int64_t per_database, LoadStrategy strategy = LoadStrategy::kGreedyThenAugment);

// loads[r][p][n]: atoms database n serves for partition p in round r+1, per
// message subset. Round one comes from balance_loads; later rounds follow
// a_{r+1} = I_r - a_r on each partition's members.
using RoundLoads = std::vector<std::vector<std::vector<std::int64_t>>>;

// Throws FeasibilityError if round one cannot be balanced.
RoundLoads compute_round_loads(const SystemParams& params,
                               const std::vector<std::vector<int>>& subsets,
                               LoadStrategy strategy = LoadStrategy::kGreedyThenAugment);

}  // namespace hybridpir
